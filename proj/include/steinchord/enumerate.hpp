#pragma once

#include "steinchord/chord_diagram.hpp"

#include <cstdint>
#include <vector>

namespace steinchord {

namespace detail {

template <typename Fn>
void enumerate_rec(std::uint32_t n, std::vector<Point>& table, Point from, Fn& fn) {
    const Point points = 2 * n;
    Point least = 0;
    for (Point i = from; i <= points; ++i) {
        if (table[i] == 0) {
            least = i;
            break;
        }
    }
    if (least == 0) {
        fn(ChordDiagram::unchecked(n, table));
        return;
    }
    for (Point q = least + 1; q <= points; ++q) {
        if (table[q] != 0) continue;
        table[least] = q;
        table[q] = least;
        enumerate_rec(n, table, least + 1, fn);
        table[least] = 0;
        table[q] = 0;
    }
}

}  // namespace detail

// Visits every diagram of size n exactly once, in the fixed order: match the
// least unmatched point to each larger unmatched candidate in ascending
// order, then recurse.  (2n-1)!! leaves; practical for n <= 8.
template <typename Fn>
void for_each_diagram(std::uint32_t n, Fn fn) {
    if (n == 0) throw OutOfRangeError("for_each_diagram: n must be >= 1");
    std::vector<Point> table(2 * n + 1, 0);
    detail::enumerate_rec(n, table, 1, fn);
}

inline std::vector<ChordDiagram> enumerate_all(std::uint32_t n) {
    std::vector<ChordDiagram> out;
    for_each_diagram(n, [&](const ChordDiagram& d) { out.push_back(d); });
    return out;
}

}  // namespace steinchord
