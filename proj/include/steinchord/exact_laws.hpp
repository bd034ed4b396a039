#pragma once

#include "steinchord/chord_diagram.hpp"
#include "steinchord/pmf.hpp"
#include "steinchord/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace steinchord {

// Exact law of the crossing count, for n up to roughly 60.
//
// Sweep the linearized diagram left to right.  State: (m open chords,
// accumulated crossings), with big-integer multiplicities.  An open step
// keeps the count; closing one of m open chords crosses exactly the chords
// that opened later and are still open, so it contributes a factor
// 1 + q + ... + q^(m-1).  The open branch must also respect the global cap
// of n chords: m open plus (step+m)/2 opened-so-far tracks that, and
// without the cap impossible prefixes inflate the coefficients.
inline Pmf crossing_pmf_exact(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("crossing_pmf_exact: n must be >= 1");
    const std::size_t max_degree = static_cast<std::size_t>(n) * (n - 1) / 2;
    using Row = std::vector<BigInt>;
    std::vector<Row> state(n + 1, Row(max_degree + 1));
    std::vector<Row> next_state(n + 1, Row(max_degree + 1));
    state[0][0] = 1;

    for (std::uint32_t step = 0; step < 2 * n; ++step) {
        for (auto& row : next_state) std::fill(row.begin(), row.end(), BigInt(0));
        for (std::uint32_t m = 0; m <= n; ++m) {
            const Row& src = state[m];
            const std::uint32_t opens_used = (step + m) / 2;
            if (m + 1 <= n && opens_used < n) {
                Row& dst = next_state[m + 1];
                for (std::size_t g = 0; g <= max_degree; ++g)
                    if (src[g] != 0) dst[g] += src[g];
            }
            if (m >= 1) {
                // Multiply by 1 + q + ... + q^(m-1) via a sliding window:
                // dst[g] += src[g-m+1] + ... + src[g].
                Row& dst = next_state[m - 1];
                BigInt window = 0;
                for (std::size_t g = 0; g <= max_degree; ++g) {
                    window += src[g];
                    if (g >= m) window -= src[g - m];
                    if (window != 0) dst[g] += window;
                }
            }
        }
        state.swap(next_state);
    }

    std::map<std::uint64_t, BigInt> counts;
    for (std::size_t g = 0; g <= max_degree; ++g)
        if (state[0][g] != 0) counts[g] = state[0][g];
    return Pmf::from_counts(counts, diagram_count(n));
}

// Number of k-subsets of an m-cycle with no two elements cyclically
// adjacent: (m/(m-k)) C(m-k, k).  These index the families of k pairwise
// disjoint simple-chord positions.
inline BigInt cycle_nonadjacent_sets(std::uint64_t m, std::uint64_t k) {
    if (k == 0) return 1;
    if (2 * k > m) return 0;
    return binomial(m - k, k) * m / BigInt(m - k);
}

namespace detail {

// E[product of the simple-chord indicators over a disjoint k-family],
// summed over all families: c(2n,k) (2n-2k-1)!!/(2n-1)!!.
inline std::vector<Rational> simple_chord_binomial_moments(std::uint32_t n) {
    std::vector<Rational> e(n + 1);
    const BigInt total = diagram_count(n);
    for (std::uint32_t k = 0; k <= n; ++k)
        e[k] = Rational(cycle_nonadjacent_sets(2ull * n, k) *
                            double_factorial(2 * static_cast<std::int64_t>(n - k) - 1),
                        total);
    return e;
}

}  // namespace detail

// Exact law of the simple-chord count by inclusion-exclusion over disjoint
// position families: P(S = m) = sum_{k >= m} (-1)^(k-m) C(k,m) e_k.  n = 1
// is special-cased to the point mass at 2: positions 1 and 2 both indicate
// the same chord there, which breaks the disjointness the expansion needs.
inline Pmf simple_chord_pmf_exact(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("simple_chord_pmf_exact: n must be >= 1");
    if (n == 1) return Pmf::from_weights({{2, Rational(1)}});
    const auto e = detail::simple_chord_binomial_moments(n);
    std::vector<Pmf::Entry> entries;
    for (std::uint32_t m = 0; m <= n; ++m) {
        Rational p = 0;
        for (std::uint32_t k = m; k <= n; ++k) {
            const Rational term = Rational(binomial(k, m)) * e[k];
            if ((k - m) % 2 == 0)
                p += term;
            else
                p -= term;
        }
        if (p != 0) entries.emplace_back(m, p);
    }
    return Pmf::from_weights(std::move(entries));
}

// s(n): diagrams of size n with no simple chord, as an exact integer
// (the m = 0 alternating sum of the expansion above).  s(1) = 0.
inline BigInt simple_chord_free_count(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("simple_chord_free_count: n must be >= 1");
    if (n == 1) return 0;
    BigInt s = 0;
    for (std::uint32_t k = 0; k <= n; ++k) {
        const BigInt term = cycle_nonadjacent_sets(2ull * n, k) *
                            double_factorial(2 * static_cast<std::int64_t>(n - k) - 1);
        if (k % 2 == 0)
            s += term;
        else
            s -= term;
    }
    return s;
}

// Claimed enclosure for s(n), as factors relative to (2n-1)!! to avoid
// overflow: s(n)/(2n-1)!! must lie in
//   [(1/e)(exp(-1/(2n-1)) - 10/n), (1/e)(exp(-1/(2n-1)) + 10/n)].
inline std::pair<double, double> scfree_bounds(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("scfree_bounds: n must be >= 1");
    const double core = std::exp(-1.0 / (2.0 * n - 1.0));
    const double spread = 10.0 / n;
    return {(core - spread) / std::exp(1.0), (core + spread) / std::exp(1.0)};
}

}  // namespace steinchord
