#pragma once

#include "steinchord/rational.hpp"
#include "steinchord/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace steinchord {

// Points on the circle are numbered 1..2n clockwise; positional arithmetic is
// modulo 2n mapped back into [1, 2n].
using Point = std::uint32_t;

struct DiagramError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DuplicateEndpointError : DiagramError {
    using DiagramError::DiagramError;
};
struct IncompleteMatchingError : DiagramError {
    using DiagramError::DiagramError;
};
struct SelfLoopError : DiagramError {
    using DiagramError::DiagramError;
};
struct OutOfRangeError : DiagramError {
    using DiagramError::DiagramError;
};

// A fixed-point-free involution on [2n]: partner(partner(i)) = i and
// partner(i) != i for all i.  Immutable after construction and safe to share
// across threads.
class ChordDiagram {
  public:
    // Validating constructor.  Pairs may come in any order and orientation;
    // the points used must be exactly [1, 2n] for some n.
    static ChordDiagram from_pairs(const std::vector<std::pair<Point, Point>>& pairs) {
        if (pairs.empty()) throw IncompleteMatchingError("from_pairs: no chords given");
        const Point points = static_cast<Point>(2 * pairs.size());
        std::vector<Point> table(points + 1, 0);
        for (const auto& [x, y] : pairs) {
            if (x < 1 || x > points || y < 1 || y > points)
                throw OutOfRangeError("from_pairs: endpoint outside [1, 2n]");
            if (x == y) throw SelfLoopError("from_pairs: chord (i,i)");
            if (table[x] != 0) throw DuplicateEndpointError("from_pairs: repeated endpoint");
            if (table[y] != 0) throw DuplicateEndpointError("from_pairs: repeated endpoint");
            table[x] = y;
            table[y] = x;
        }
        for (Point i = 1; i <= points; ++i)
            if (table[i] == 0) throw IncompleteMatchingError("from_pairs: unmatched point");
        return ChordDiagram(static_cast<std::uint32_t>(pairs.size()), std::move(table));
    }

    // Validating constructor from a 1-based partner table (index 0 ignored).
    static ChordDiagram from_partner_table(const std::vector<Point>& partner) {
        if (partner.size() < 3 || partner.size() % 2 == 0)
            throw IncompleteMatchingError("from_partner_table: table must hold 2n entries");
        const Point points = static_cast<Point>(partner.size() - 1);
        std::vector<std::pair<Point, Point>> pairs;
        for (Point i = 1; i <= points; ++i) {
            const Point p = partner[i];
            if (p < 1 || p > points) throw OutOfRangeError("from_partner_table: partner outside [1, 2n]");
            if (p == i) throw SelfLoopError("from_partner_table: fixed point");
            if (partner[p] != i) throw IncompleteMatchingError("from_partner_table: not an involution");
            if (i < p) pairs.emplace_back(i, p);
        }
        if (2 * pairs.size() != points) throw IncompleteMatchingError("from_partner_table: not a matching");
        return from_pairs(pairs);
    }

    // Trusted fast path for the enumerator, sampler, and couplings, which
    // construct valid tables by design; invariants are asserted in debug
    // builds and re-checked by the validating paths in tests.
    static ChordDiagram unchecked(std::uint32_t n, std::vector<Point> partner) {
        assert(partner.size() == 2 * static_cast<std::size_t>(n) + 1);
#ifndef NDEBUG
        for (Point i = 1; i <= 2 * n; ++i) {
            assert(partner[i] >= 1 && partner[i] <= 2 * n);
            assert(partner[i] != i);
            assert(partner[partner[i]] == i);
        }
#endif
        return ChordDiagram(n, std::move(partner));
    }

    std::uint32_t n() const { return n_; }
    Point points() const { return 2 * n_; }

    Point partner(Point i) const {
        assert(i >= 1 && i <= points());
        return partner_[i];
    }

    // i + 1 on the circle, wrapping 2n -> 1.
    Point next(Point i) const { return i % points() + 1; }

    // Chords as (min, max) endpoint pairs, ascending by first endpoint.
    std::vector<std::pair<Point, Point>> chords() const {
        std::vector<std::pair<Point, Point>> out;
        out.reserve(n_);
        for (Point i = 1; i <= points(); ++i)
            if (i < partner_[i]) out.emplace_back(i, partner_[i]);
        return out;
    }

    const std::vector<Point>& partner_table() const { return partner_; }

    bool operator==(const ChordDiagram& other) const { return partner_ == other.partner_; }
    bool operator!=(const ChordDiagram& other) const { return !(*this == other); }

  private:
    ChordDiagram(std::uint32_t n, std::vector<Point> partner)
        : n_(n), partner_(std::move(partner)) {}

    std::uint32_t n_;
    std::vector<Point> partner_;  // 1-based; partner_[0] unused
};

// Uniform sampling over all (2n-1)!! diagrams.  Algorithm (frozen, part of
// the stream-reproducibility contract): repeatedly match the least-index
// unmatched point to a uniformly random other unmatched point.  Every
// diagram arises from exactly one choice sequence with probability
// 1/((2n-1)(2n-3)...1), hence uniformly.
inline ChordDiagram sample_uniform(std::uint32_t n, StreamRng& rng) {
    if (n == 0) throw OutOfRangeError("sample_uniform: n must be >= 1");
    const Point points = 2 * n;
    std::vector<Point> pool(points);
    for (Point i = 0; i < points; ++i) pool[i] = i + 1;  // ascending
    std::vector<Point> table(points + 1, 0);
    while (!pool.empty()) {
        const Point a = pool.front();
        const std::size_t pick = 1 + static_cast<std::size_t>(rng.uniform_below(pool.size() - 1));
        const Point b = pool[pick];
        table[a] = b;
        table[b] = a;
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        pool.erase(pool.begin());
    }
    return ChordDiagram::unchecked(n, std::move(table));
}

// Probability that a uniform diagram contains k given disjoint chords:
// (2n-2k-1)!!/(2n-1)!! = 1/((2n-1)(2n-3)...(2n-2k+1)).
inline Rational chord_set_probability(std::uint32_t n, std::uint32_t k) {
    if (k == 0 || k > n) throw OutOfRangeError("chord_set_probability: need 1 <= k <= n");
    return Rational(double_factorial(2 * static_cast<std::int64_t>(n - k) - 1),
                    diagram_count(n));
}

}  // namespace steinchord
