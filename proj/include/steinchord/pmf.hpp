#pragma once

#include "steinchord/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace steinchord {

struct PmfError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroMeanError : PmfError {
    using PmfError::PmfError;
};

// Exact probability mass function on non-negative integers: ascending
// duplicate-free support, strictly positive rational weights, total weight
// exactly 1.
class Pmf {
  public:
    using Entry = std::pair<std::uint64_t, Rational>;

    static Pmf from_weights(std::vector<Entry> entries) {
        Rational total = 0;
        std::uint64_t prev = 0;
        bool first = true;
        for (const auto& [value, weight] : entries) {
            if (!first && value <= prev) throw PmfError("Pmf: support not strictly ascending");
            if (weight <= 0) throw PmfError("Pmf: weights must be positive");
            prev = value;
            first = false;
            total += weight;
        }
        if (total != 1) throw PmfError("Pmf: weights must sum to exactly 1");
        return Pmf(std::move(entries));
    }

    // Histogram counts over a known total; zero cells are dropped.
    static Pmf from_counts(const std::map<std::uint64_t, BigInt>& counts, const BigInt& total) {
        std::vector<Entry> entries;
        for (const auto& [value, count] : counts) {
            if (count < 0) throw PmfError("Pmf: negative count");
            if (count != 0) entries.emplace_back(value, Rational(count, total));
        }
        return from_weights(std::move(entries));
    }

    const std::vector<Entry>& entries() const { return entries_; }

    Rational at(std::uint64_t value) const {
        for (const auto& [v, w] : entries_)
            if (v == value) return w;
        return Rational(0);
    }

    std::uint64_t max_support() const { return entries_.back().first; }

    Rational mean() const {
        Rational m = 0;
        for (const auto& [v, w] : entries_) m += Rational(v) * w;
        return m;
    }

    Rational variance() const {
        const Rational m = mean();
        Rational s = 0;
        for (const auto& [v, w] : entries_) {
            const Rational dev = Rational(v) - m;
            s += dev * dev * w;
        }
        return s;
    }

    bool operator==(const Pmf& other) const { return entries_ == other.entries_; }
    bool operator!=(const Pmf& other) const { return !(*this == other); }

  private:
    explicit Pmf(std::vector<Entry> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw PmfError("Pmf: empty support");
    }

    std::vector<Entry> entries_;
};

}  // namespace steinchord
