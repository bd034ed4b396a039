#include "steinchord/enumerate.hpp"
#include "steinchord/exact_laws.hpp"
#include "steinchord/statistics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>

using namespace steinchord;

namespace {

Pmf brute_force_pmf(std::uint32_t n, std::uint64_t (*statistic)(const ChordDiagram&)) {
    std::map<std::uint64_t, BigInt> counts;
    for_each_diagram(n, [&](const ChordDiagram& d) { counts[statistic(d)] += 1; });
    return Pmf::from_counts(counts, diagram_count(n));
}

std::uint64_t crossings_of(const ChordDiagram& d) { return count_crossings_naive(d); }
std::uint64_t simple_of(const ChordDiagram& d) { return count_simple_chords(d); }

}  // namespace

TEST_CASE("crossing law equals brute-force enumeration") {
    for (std::uint32_t n = 1; n <= 6; ++n)
        CHECK(crossing_pmf_exact(n) == brute_force_pmf(n, crossings_of));
}

TEST_CASE("crossing law small cases by hand") {
    const Pmf p2 = crossing_pmf_exact(2);
    CHECK(p2.at(0) == Rational(2, 3));
    CHECK(p2.at(1) == Rational(1, 3));

    const Pmf p3 = crossing_pmf_exact(3);
    CHECK(p3.at(0) == Rational(1, 3));   // 5/15
    CHECK(p3.at(1) == Rational(2, 5));   // 6/15
    CHECK(p3.at(2) == Rational(1, 5));   // 3/15
    CHECK(p3.at(3) == Rational(1, 15));
    CHECK(p3.max_support() == 3);
}

TEST_CASE("mass at zero crossings is Catalan(n)/(2n-1)!!") {
    for (std::uint32_t n = 1; n <= 20; ++n)
        CHECK(crossing_pmf_exact(n).at(0) == Rational(catalan(n), diagram_count(n)));
}

TEST_CASE("crossing law moments match n(n-1)/6 and n(n-1)(n+3)/45") {
    for (std::uint32_t n = 1; n <= 16; ++n) {
        const Pmf p = crossing_pmf_exact(n);
        const auto [mu, var] = crossing_mean_variance(n);
        CHECK(p.mean() == mu);
        CHECK(p.variance() == var);
    }
}

TEST_CASE("maximum crossing count is C(n,2) with probability 1/(2n-1)!!") {
    for (std::uint32_t n = 2; n <= 10; ++n) {
        const Pmf p = crossing_pmf_exact(n);
        CHECK(p.max_support() == static_cast<std::uint64_t>(n) * (n - 1) / 2);
        CHECK(p.at(p.max_support()) == Rational(1, diagram_count(n)));
    }
}

TEST_CASE("cycle_nonadjacent_sets matches a bitmask oracle") {
    // brute force: subsets of Z_m with no two cyclically adjacent elements
    for (unsigned m = 3; m <= 14; ++m) {
        std::vector<std::uint64_t> by_size(m / 2 + 1, 0);
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            bool ok = true;
            for (unsigned i = 0; i < m && ok; ++i)
                if ((mask >> i & 1) && (mask >> ((i + 1) % m) & 1)) ok = false;
            if (!ok) continue;
            const unsigned size = static_cast<unsigned>(__builtin_popcount(mask));
            if (size < by_size.size()) ++by_size[size];
        }
        for (unsigned k = 0; k < by_size.size(); ++k)
            CHECK(cycle_nonadjacent_sets(m, k) == by_size[k]);
        for (unsigned k = static_cast<unsigned>(by_size.size()); k <= m; ++k)
            CHECK(cycle_nonadjacent_sets(m, k) == 0);
    }
}

TEST_CASE("simple-chord law equals brute-force enumeration") {
    for (std::uint32_t n = 2; n <= 6; ++n)
        CHECK(simple_chord_pmf_exact(n) == brute_force_pmf(n, simple_of));
    CHECK(simple_chord_pmf_exact(1) == Pmf::from_weights({{2, Rational(1)}}));
}

TEST_CASE("simple-chord law at n=5 by hand") {
    const Pmf p = simple_chord_pmf_exact(5);
    CHECK(p.at(0) == Rational(293, 945));
    CHECK(p.at(1) == Rational(8, 21));
    CHECK(p.at(2) == Rational(41, 189));
    CHECK(p.at(3) == Rational(2, 27));
    CHECK(p.at(4) == Rational(1, 63));
    CHECK(p.at(5) == Rational(2, 945));
    CHECK(p.mean() == Rational(10, 9));
    CHECK(p.variance() == Rational(80, 81));
}

TEST_CASE("simple-chord mean is 2n/(2n-1)") {
    for (std::uint32_t n = 2; n <= 12; ++n)
        CHECK(simple_chord_pmf_exact(n).mean() == Rational(2 * BigInt(n), 2 * BigInt(n) - 1));
}

TEST_CASE("simple-chord-free count: small values and brute force") {
    CHECK(simple_chord_free_count(1) == 0);
    CHECK(simple_chord_free_count(2) == 1);   // only the crossing diagram
    CHECK(simple_chord_free_count(3) == 4);
    for (std::uint32_t n = 2; n <= 6; ++n) {
        BigInt brute = 0;
        for_each_diagram(n, [&](const ChordDiagram& d) { brute += count_simple_chords(d) == 0; });
        CHECK(simple_chord_free_count(n) == brute);
    }
}

TEST_CASE("simple-chord-free count is the zero cell of the exact law") {
    for (std::uint32_t n = 2; n <= 20; ++n)
        CHECK(Rational(simple_chord_free_count(n), diagram_count(n)) ==
              simple_chord_pmf_exact(n).at(0));
}

TEST_CASE("simple-chord-free enclosure") {
    for (std::uint32_t n = 1; n <= 40; ++n) {
        const auto [low, high] = scfree_bounds(n);
        CHECK(low < high);
        const double ratio = to_double(Rational(simple_chord_free_count(n), diagram_count(n)));
        CHECK(ratio >= low);
        CHECK(ratio <= high);
    }
    // below n=10 the lower bound is vacuous (negative)
    CHECK(scfree_bounds(3).first < 0);
    CHECK(scfree_bounds(40).first > 0);
}

TEST_CASE("the free-count ratio approaches 1/e from within a shrinking window") {
    const auto gap = [](std::uint32_t n) {
        const double ratio = to_double(Rational(simple_chord_free_count(n), diagram_count(n)));
        return std::abs(ratio * std::exp(1.0) - 1.0);
    };
    CHECK(gap(40) < gap(10));
    CHECK(gap(10) < 0.08);   // observed 0.0770
    CHECK(gap(40) < 0.019);  // observed 0.0189
}

TEST_CASE("law constructors reject n = 0") {
    CHECK_THROWS_AS(crossing_pmf_exact(0), OutOfRangeError);
    CHECK_THROWS_AS(simple_chord_pmf_exact(0), OutOfRangeError);
    CHECK_THROWS_AS(simple_chord_free_count(0), OutOfRangeError);
    CHECK_THROWS_AS(scfree_bounds(0), OutOfRangeError);
}
