#pragma once

#include "steinchord/chord_diagram.hpp"
#include "steinchord/rational.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace steinchord {

namespace detail {

// Fenwick tree over positions 1..size, point add / prefix sum.
class Fenwick {
  public:
    explicit Fenwick(std::uint32_t size) : tree_(size + 1, 0) {}

    void add(std::uint32_t i, std::int32_t delta) {
        for (; i < tree_.size(); i += i & (0u - i)) tree_[i] += delta;
    }

    std::int64_t prefix(std::uint32_t i) const {
        std::int64_t s = 0;
        for (; i > 0; i -= i & (0u - i)) s += tree_[i];
        return s;
    }

  private:
    std::vector<std::int64_t> tree_;
};

// Two chords (x1,y1), (x2,y2) given with x < y cross iff their endpoints
// strictly interleave on the line 1..2n (equivalently on the circle).
inline bool chords_cross(Point x1, Point y1, Point x2, Point y2) {
    return (x1 < x2 && x2 < y1 && y1 < y2) || (x2 < x1 && x1 < y2 && y2 < y1);
}

inline bool chords_nest(Point x1, Point y1, Point x2, Point y2) {
    return (x1 < x2 && y2 < y1) || (x2 < x1 && y1 < y2);
}

}  // namespace detail

// Quadruple check over all chord pairs, O(n^2).  This is the oracle the
// sweep counter is tested against.
inline std::uint64_t count_crossings_naive(const ChordDiagram& d) {
    const auto chords = d.chords();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < chords.size(); ++i)
        for (std::size_t j = i + 1; j < chords.size(); ++j)
            if (detail::chords_cross(chords[i].first, chords[i].second,
                                     chords[j].first, chords[j].second))
                ++count;
    return count;
}

// Sweep the linearized diagram left to right keeping open chords in a
// Fenwick tree; closing the chord opened at p counts the chords that opened
// inside (p, i) and are still open — exactly the chords crossing it from the
// right.  O(n log n).
inline std::uint64_t count_crossings_fast(const ChordDiagram& d) {
    detail::Fenwick open(d.points());
    std::uint64_t count = 0;
    for (Point i = 1; i <= d.points(); ++i) {
        const Point p = d.partner(i);
        if (p > i) {
            open.add(i, 1);
        } else {
            open.add(p, -1);
            count += static_cast<std::uint64_t>(open.prefix(i) - open.prefix(p));
        }
    }
    return count;
}

inline std::uint64_t count_nestings(const ChordDiagram& d) {
    const auto chords = d.chords();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < chords.size(); ++i)
        for (std::size_t j = i + 1; j < chords.size(); ++j)
            if (detail::chords_nest(chords[i].first, chords[i].second,
                                    chords[j].first, chords[j].second))
                ++count;
    return count;
}

// Number of positions i in [2n] whose partner is the cyclically next point.
// This is the indicator-sum reading: the unique chord of a size-1 diagram is
// counted from both ends, so the value is 2 at n = 1, and otherwise each
// simple chord contributes exactly once.
inline std::uint64_t count_simple_chords(const ChordDiagram& d) {
    std::uint64_t count = 0;
    for (Point i = 1; i <= d.points(); ++i)
        if (d.partner(i) == d.next(i)) ++count;
    return count;
}

// Number of positions i with partner(i) = i + j + 1 (mod 2n).  Length 0 is
// the simple-chord count.  The admissible range is 0 <= j <= n-2, plus the
// degenerate j = 0 at n = 1.
inline std::uint64_t count_length_j(const ChordDiagram& d, std::uint32_t j) {
    if (j != 0 && (d.n() < 2 || j > d.n() - 2))
        throw OutOfRangeError("count_length_j: j outside [0, n-2]");
    const Point points = d.points();
    std::uint64_t count = 0;
    for (Point i = 1; i <= points; ++i) {
        const Point target = static_cast<Point>((i - 1 + j + 1) % points + 1);
        if (d.partner(i) == target) ++count;
    }
    return count;
}

// Connected components of the chord intersection graph (chords adjacent iff
// they cross), by union-find over the O(n^2) pair scan.
inline std::uint32_t count_components(const ChordDiagram& d) {
    const auto chords = d.chords();
    std::vector<std::uint32_t> parent(chords.size());
    std::iota(parent.begin(), parent.end(), 0u);
    const auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::uint32_t components = static_cast<std::uint32_t>(chords.size());
    for (std::size_t i = 0; i < chords.size(); ++i)
        for (std::size_t j = i + 1; j < chords.size(); ++j)
            if (detail::chords_cross(chords[i].first, chords[i].second,
                                     chords[j].first, chords[j].second)) {
                const auto a = find(static_cast<std::uint32_t>(i));
                const auto b = find(static_cast<std::uint32_t>(j));
                if (a != b) {
                    parent[a] = b;
                    --components;
                }
            }
    return components;
}

// Exact crossing moments of the uniform diagram:
//   mean = n(n-1)/6,  variance = n(n-1)(n+3)/45.
inline std::pair<Rational, Rational> crossing_mean_variance(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("crossing_mean_variance: n must be >= 1");
    const BigInt nn = n;
    return {Rational(nn * (nn - 1), 6), Rational(nn * (nn - 1) * (nn + 3), 45)};
}

struct DiagramStats {
    std::uint64_t crossings = 0;
    std::uint64_t nestings = 0;
    std::uint64_t simple_chords = 0;
    std::uint32_t components = 1;
    std::map<std::uint32_t, std::uint64_t> length_counts;  // j -> count
};

inline DiagramStats compute_stats(const ChordDiagram& d) {
    DiagramStats s;
    s.crossings = count_crossings_fast(d);
    s.nestings = count_nestings(d);
    s.simple_chords = count_simple_chords(d);
    s.components = count_components(d);
    const std::uint32_t max_j = d.n() >= 2 ? d.n() - 2 : 0;
    for (std::uint32_t j = 0; j <= max_j; ++j) s.length_counts[j] = count_length_j(d, j);
    return s;
}

}  // namespace steinchord
