#pragma once

#include "steinchord/chord_diagram.hpp"
#include "steinchord/enumerate.hpp"
#include "steinchord/pmf.hpp"
#include "steinchord/rng.hpp"
#include "steinchord/statistics.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace steinchord {

struct Quadruple {
    Point a, b, c, d;  // strictly increasing points in [2n]

    bool operator==(const Quadruple&) const = default;
};

inline void validate_quadruple(const ChordDiagram& diagram, const Quadruple& q) {
    if (!(q.a >= 1 && q.a < q.b && q.b < q.c && q.c < q.d && q.d <= diagram.points()))
        throw OutOfRangeError("Quadruple: need 1 <= a < b < c < d <= 2n");
}

// All C(2n,4) quadruples in colexicographic order (d outermost).
inline std::vector<Quadruple> all_quadruples(std::uint32_t n) {
    std::vector<Quadruple> out;
    const Point points = 2 * n;
    for (Point d = 4; d <= points; ++d)
        for (Point c = 3; c < d; ++c)
            for (Point b = 2; b < c; ++b)
                for (Point a = 1; a < b; ++a) out.push_back({a, b, c, d});
    return out;
}

// Deliberate defects for negative-control tests: a corrupted coupling must
// be caught by the exact-law verifier, either as an invalid diagram or as a
// law mismatch.
enum class CouplingCorruption {
    None,
    SkipRejoin,      // drop the chord rejoining leftover partners (invalid diagram)
    NestedAddition,  // add the nested pair (a,d),(b,c) instead of the crossing (valid, wrong law)
};

struct CouplingOutcome {
    ChordDiagram original;
    ChordDiagram coupled;
    std::variant<Quadruple, Point> index;
    std::uint64_t stat_before = 0;
    std::uint64_t stat_after = 0;

    std::int64_t delta() const {
        return static_cast<std::int64_t>(stat_after) - static_cast<std::int64_t>(stat_before);
    }
};

namespace detail {

// Partner-table transformation behind couple_crossings.  Returns the table
// of the coupled diagram; with CouplingCorruption::SkipRejoin the table may
// contain unmatched points (zeros), which the validating constructor rejects.
inline std::vector<Point> coupled_crossing_table(const ChordDiagram& diagram, const Quadruple& q,
                                                 CouplingCorruption corruption) {
    std::vector<Point> table = diagram.partner_table();
    if (table[q.a] == q.c && table[q.b] == q.d) return table;

    const std::array<Point, 4> quad{q.a, q.b, q.c, q.d};
    const std::array<Point, 4> old_partners{table[q.a], table[q.b], table[q.c], table[q.d]};
    const auto in_quad = [&](Point p) {
        return p == q.a || p == q.b || p == q.c || p == q.d;
    };

    for (Point x : quad) {
        table[table[x]] = 0;
        table[x] = 0;
    }
    if (corruption == CouplingCorruption::NestedAddition) {
        table[q.a] = q.d;
        table[q.d] = q.a;
        table[q.b] = q.c;
        table[q.c] = q.b;
    } else {
        table[q.a] = q.c;
        table[q.c] = q.a;
        table[q.b] = q.d;
        table[q.d] = q.b;
    }

    // Former partners of the quadruple that lie outside it are now
    // unmatched; |R| is 4, 2, or 0 according to how many chords ran inside
    // {a,b,c,d}.  With all four outside, rematch them as (pi(a),pi(c)) and
    // (pi(b),pi(d)); a single leftover pair is joined directly.
    std::array<Point, 4> leftovers{};
    std::size_t leftover_count = 0;
    for (Point p : old_partners)
        if (!in_quad(p)) leftovers[leftover_count++] = p;

    if (leftover_count == 4) {
        table[old_partners[0]] = old_partners[2];
        table[old_partners[2]] = old_partners[0];
        table[old_partners[1]] = old_partners[3];
        table[old_partners[3]] = old_partners[1];
    } else if (leftover_count == 2 && corruption != CouplingCorruption::SkipRejoin) {
        table[leftovers[0]] = leftovers[1];
        table[leftovers[1]] = leftovers[0];
    }
    return table;
}

inline std::vector<Point> coupled_simple_table(const ChordDiagram& diagram, Point i,
                                               CouplingCorruption corruption) {
    std::vector<Point> table = diagram.partner_table();
    const Point j = diagram.next(i);
    if (table[i] == j) return table;
    const Point u = table[i];
    const Point v = table[j];
    table[i] = j;
    table[j] = i;
    if (corruption == CouplingCorruption::SkipRejoin) {
        table[u] = 0;
        table[v] = 0;
    } else {
        table[u] = v;
        table[v] = u;
    }
    return table;
}

// Crossing count straight off a partner table, with a caller-owned Fenwick
// buffer so hot loops do not allocate.
class TableCrossingCounter {
  public:
    explicit TableCrossingCounter(Point points) : points_(points), tree_(points + 1, 0) {}

    std::uint64_t count(const std::vector<Point>& table) {
        std::fill(tree_.begin(), tree_.end(), 0);
        std::uint64_t crossings = 0;
        for (Point i = 1; i <= points_; ++i) {
            const Point p = table[i];
            if (p > i) {
                add(i, 1);
            } else {
                add(p, -1);
                crossings += static_cast<std::uint64_t>(prefix(i) - prefix(p));
            }
        }
        return crossings;
    }

  private:
    void add(std::uint32_t i, std::int32_t delta) {
        for (; i <= points_; i += i & (0u - i)) tree_[i] += delta;
    }
    std::int64_t prefix(std::uint32_t i) const {
        std::int64_t s = 0;
        for (; i > 0; i -= i & (0u - i)) s += tree_[i];
        return s;
    }

    Point points_;
    std::vector<std::int64_t> tree_;
};

}  // namespace detail

// Size-bias coupling for the crossing count.  If the chords (a,c),(b,d) are
// already present the diagram is returned unchanged; otherwise every chord
// meeting {a,b,c,d} is removed, (a,c) and (b,d) are added, and the leftover
// outside partners are rematched by the |R| in {0,2,4} case split in
// detail::coupled_crossing_table.  The coupled diagram always realises the
// crossing at the chosen quadruple.
inline CouplingOutcome couple_crossings(const ChordDiagram& diagram, const Quadruple& q,
                                        CouplingCorruption corruption = CouplingCorruption::None) {
    validate_quadruple(diagram, q);
    ChordDiagram coupled =
        ChordDiagram::from_partner_table(detail::coupled_crossing_table(diagram, q, corruption));
    CouplingOutcome out{diagram, std::move(coupled), q, count_crossings_fast(diagram), 0};
    out.stat_after = count_crossings_fast(out.coupled);
    assert(corruption != CouplingCorruption::None ||
           (out.coupled.partner(q.a) == q.c && out.coupled.partner(q.b) == q.d));
    assert(std::llabs(out.delta()) <= 4ll * diagram.n());
    return out;
}

// Size-bias coupling for the simple-chord count at position i: if (i, i+1)
// is already a chord nothing changes; otherwise the two chords leaving i and
// i+1 are replaced by (i, i+1) and the chord joining their former partners.
inline CouplingOutcome couple_simple(const ChordDiagram& diagram, Point i,
                                     CouplingCorruption corruption = CouplingCorruption::None) {
    if (i < 1 || i > diagram.points()) throw OutOfRangeError("couple_simple: position outside [1, 2n]");
    if (corruption == CouplingCorruption::NestedAddition)
        throw std::invalid_argument("couple_simple: NestedAddition applies to the crossing coupling only");
    ChordDiagram coupled =
        ChordDiagram::from_partner_table(detail::coupled_simple_table(diagram, i, corruption));
    CouplingOutcome out{diagram, std::move(coupled), i, count_simple_chords(diagram), 0};
    out.stat_after = count_simple_chords(out.coupled);
    assert(out.coupled.partner(i) == diagram.next(i));
    assert(out.stat_after >= 1);
    return out;
}

// P(X^s = x) = x P(X = x) / E X; the support drops 0.
inline Pmf size_bias_pmf(const Pmf& p) {
    const Rational mean = p.mean();
    if (mean == 0) throw ZeroMeanError("size_bias_pmf: distribution has zero mean");
    std::vector<Pmf::Entry> entries;
    for (const auto& [value, weight] : p.entries())
        if (value > 0) entries.emplace_back(value, Rational(value) * weight / mean);
    return Pmf::from_weights(std::move(entries));
}

// Delta(pi) = E[X^s - X | pi] = (1/N) sum over quadruples of the coupled
// crossing change, N = C(2n,4).  Exact; cost N couplings, so meant for small
// n (use the sampled variant beyond that).
inline Rational conditional_mean_increment(const ChordDiagram& diagram) {
    if (diagram.n() < 2) throw OutOfRangeError("conditional_mean_increment: n must be >= 2");
    const Point points = diagram.points();
    detail::TableCrossingCounter counter(points);
    const std::int64_t before = static_cast<std::int64_t>(count_crossings_fast(diagram));
    std::int64_t sum = 0;
    std::uint64_t quads = 0;
    for (Point d = 4; d <= points; ++d)
        for (Point c = 3; c < d; ++c)
            for (Point b = 2; b < c; ++b)
                for (Point a = 1; a < b; ++a) {
                    const auto table = detail::coupled_crossing_table(
                        diagram, {a, b, c, d}, CouplingCorruption::None);
                    sum += static_cast<std::int64_t>(counter.count(table)) - before;
                    ++quads;
                }
    return Rational(BigInt(sum), BigInt(quads));
}

// Unbiased estimate of Delta(pi) from `samples` quadruples drawn uniformly
// with replacement.
inline double conditional_mean_increment_sampled(const ChordDiagram& diagram, std::uint64_t samples,
                                                 StreamRng& rng) {
    if (diagram.n() < 2) throw OutOfRangeError("conditional_mean_increment_sampled: n must be >= 2");
    if (samples == 0) throw std::invalid_argument("conditional_mean_increment_sampled: samples must be >= 1");
    const Point points = diagram.points();
    detail::TableCrossingCounter counter(points);
    const std::int64_t before = static_cast<std::int64_t>(count_crossings_fast(diagram));
    std::int64_t sum = 0;
    std::array<Point, 4> pick{};
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::size_t filled = 0;
        while (filled < 4) {
            const Point p = static_cast<Point>(rng.uniform_below(points)) + 1;
            bool fresh = true;
            for (std::size_t t = 0; t < filled; ++t)
                if (pick[t] == p) fresh = false;
            if (fresh) pick[filled++] = p;
        }
        std::sort(pick.begin(), pick.end());
        const auto table = detail::coupled_crossing_table(
            diagram, {pick[0], pick[1], pick[2], pick[3]}, CouplingCorruption::None);
        sum += static_cast<std::int64_t>(counter.count(table)) - before;
    }
    return static_cast<double>(sum) / static_cast<double>(samples);
}

enum class Statistic { Crossings, SimpleChords };

inline std::uint64_t evaluate_statistic(Statistic stat, const ChordDiagram& d) {
    return stat == Statistic::Crossings ? count_crossings_fast(d) : count_simple_chords(d);
}

struct SizeBiasRow {
    std::uint64_t value = 0;
    Rational coupled_probability;
    Rational size_bias_probability;
    bool match = false;
};

struct SizeBiasReport {
    bool pass = false;
    std::uint64_t invalid_couplings = 0;  // couplings rejected by diagram validation
    std::vector<SizeBiasRow> rows;
};

// Two-oracle exactness check.  Oracle A: the law of the coupled statistic,
// from exhaustive enumeration of (diagram, index) pairs — the index is a
// uniform quadruple for crossings (legitimate because every quadruple's
// crossing indicator has the same mean, 1/((2n-1)(2n-3))) and a uniform
// position in [2n] for simple chords.  Oracle B: size_bias_pmf applied to
// the brute-force law of the plain statistic.  The construction is correct
// iff the two laws agree at every support point, as exact rationals.
inline SizeBiasReport verify_size_bias_exact(std::uint32_t n, Statistic stat,
                                             CouplingCorruption corruption = CouplingCorruption::None) {
    if (stat == Statistic::Crossings && n < 2)
        throw OutOfRangeError("verify_size_bias_exact: crossings need n >= 2");

    const BigInt diagrams = diagram_count(n);
    const std::vector<Quadruple> quads =
        stat == Statistic::Crossings ? all_quadruples(n) : std::vector<Quadruple>{};
    const std::uint64_t index_count = stat == Statistic::Crossings ? quads.size() : 2ull * n;

    std::map<std::uint64_t, BigInt> base_counts;
    std::map<std::uint64_t, BigInt> coupled_counts;
    std::uint64_t invalid = 0;
    for_each_diagram(n, [&](const ChordDiagram& d) {
        base_counts[evaluate_statistic(stat, d)] += 1;
        for (std::uint64_t idx = 0; idx < index_count; ++idx) {
            try {
                const CouplingOutcome out =
                    stat == Statistic::Crossings
                        ? couple_crossings(d, quads[idx], corruption)
                        : couple_simple(d, static_cast<Point>(idx + 1), corruption);
                coupled_counts[out.stat_after] += 1;
            } catch (const DiagramError&) {
                ++invalid;
            }
        }
    });

    SizeBiasReport report;
    report.invalid_couplings = invalid;
    const Pmf base = Pmf::from_counts(base_counts, diagrams);
    const Pmf biased = size_bias_pmf(base);
    if (invalid > 0) {
        report.pass = false;
        return report;
    }
    const Pmf coupled = Pmf::from_counts(coupled_counts, diagrams * index_count);

    bool all_match = true;
    std::vector<std::uint64_t> support;
    for (const auto& [v, w] : coupled.entries()) support.push_back(v);
    for (const auto& [v, w] : biased.entries())
        if (coupled.at(v) == 0) support.push_back(v);
    std::sort(support.begin(), support.end());
    for (const std::uint64_t v : support) {
        SizeBiasRow row{v, coupled.at(v), biased.at(v), false};
        row.match = row.coupled_probability == row.size_bias_probability;
        all_match = all_match && row.match;
        report.rows.push_back(row);
    }
    report.pass = all_match;
    return report;
}

}  // namespace steinchord
