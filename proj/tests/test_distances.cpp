#include "steinchord/distances.hpp"
#include "steinchord/exact_laws.hpp"
#include "steinchord/statistics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace steinchord;

namespace {

// Independent normal CDF oracle: Phi(x) = 1/2 + phi(x) sum_k x^(2k+1)/(2k+1)!!
// (Maclaurin series in double-factorial form), good to ~1e-15 for |x| <= 3.
double normal_cdf_series(double x) {
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0));
    double term = x, sum = 0;
    for (int k = 0; k < 200 && std::abs(term) > 1e-18; ++k) {
        sum += term;
        term *= x * x / (2.0 * k + 3.0);
    }
    return 0.5 + density * sum;
}

}  // namespace

TEST_CASE("normal_cdf against the series oracle and frozen points") {
    CHECK(normal_cdf(0.0) == 0.5);
    for (const double x : {-3.0, -1.96, -0.5, 0.25, 1.0, 1.96, 2.5, 3.0})
        CHECK(std::abs(normal_cdf(x) - normal_cdf_series(x)) < 1e-14);
    // scipy.stats.norm.cdf(1.96), frozen
    CHECK(normal_cdf(1.96) == Catch::Approx(0.9750021048517795).margin(1e-12));
    for (const double x : {0.3, 1.7, 2.9})
        CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-14);
    CHECK(normal_cdf(9.0) > 1 - 1e-12);
    CHECK(normal_cdf(-9.0) < 1e-12);
}

TEST_CASE("poisson_pmf values and normalization") {
    CHECK(poisson_pmf(1.0, 0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(poisson_pmf(2.0, 3) == Catch::Approx(8.0 / 6.0 * std::exp(-2.0)).epsilon(1e-13));
    double mass = 0, mean = 0;
    for (std::uint64_t k = 0; k <= 200; ++k) {
        const double q = poisson_pmf(3.5, k);
        mass += q;
        mean += static_cast<double>(k) * q;
    }
    CHECK(mass == Catch::Approx(1.0).margin(1e-12));
    CHECK(mean == Catch::Approx(3.5).margin(1e-11));
    CHECK_THROWS_AS(poisson_pmf(0.0, 1), std::invalid_argument);
}

TEST_CASE("kolmogorov distance: hand-computed two-point law") {
    // {0: 1/2, 2: 1/2} against N(1,1): the largest gap is Phi(1) - 1/2 at
    // the right limit of the atom at 0 (and symmetrically at 2)
    const Pmf p = Pmf::from_weights({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    const double expected = normal_cdf(1.0) - 0.5;
    CHECK(kolmogorov_distance_to_normal(p, 1.0, 1.0) ==
          Catch::Approx(expected).margin(1e-14));
}

TEST_CASE("kolmogorov distance: point mass centred on the normal is 1/2") {
    const Pmf point = Pmf::from_weights({{0, Rational(1)}});
    CHECK(kolmogorov_distance_to_normal(point, 0.0, 1.0) ==
          Catch::Approx(0.5).margin(1e-14));
    CHECK_THROWS_AS(kolmogorov_distance_to_normal(point, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("kolmogorov distance of the standardized crossing law shrinks with n") {
    const auto dk = [](std::uint32_t n) {
        const auto [mu, var] = crossing_mean_variance(n);
        return kolmogorov_distance_to_normal(crossing_pmf_exact(n), to_double(mu),
                                             std::sqrt(to_double(var)));
    };
    // frozen oracle values computed independently with mpmath
    CHECK(dk(2) == Catch::Approx(0.426917).margin(1e-5));
    CHECK(dk(6) == Catch::Approx(0.110306).margin(1e-5));
    CHECK(dk(30) == Catch::Approx(0.022861).margin(1e-5));
    CHECK(dk(30) < dk(6));
    CHECK(dk(6) < dk(2));
}

TEST_CASE("empirical kolmogorov: exact small samples") {
    // two samples at the origin: ECDF jumps 0 -> 1 at 0 where Phi = 1/2
    CHECK(empirical_kolmogorov({0.0, 0.0}) == Catch::Approx(0.5).margin(1e-14));
    const double expected = normal_cdf(1.0) - 0.5;
    CHECK(empirical_kolmogorov({-1.0, 1.0}) == Catch::Approx(expected).margin(1e-14));
    CHECK_THROWS_AS(empirical_kolmogorov({}), EmptySampleError);
}

TEST_CASE("empirical kolmogorov is invariant under input order") {
    std::vector<double> samples;
    std::mt19937 gen(7);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 2000; ++i) samples.push_back(normal(gen));
    const double sorted_value = empirical_kolmogorov(samples);
    std::shuffle(samples.begin(), samples.end(), gen);
    CHECK(empirical_kolmogorov(samples) == sorted_value);
}

TEST_CASE("empirical kolmogorov of true normal draws is DKW-small") {
    std::vector<double> samples;
    std::mt19937 gen(11);
    std::normal_distribution<double> normal;
    const std::uint64_t m = 40000;
    for (std::uint64_t i = 0; i < m; ++i) samples.push_back(normal(gen));
    // true distance is 0; the ECDF deviation exceeds the 1e-6 DKW radius
    // with probability 1e-6
    CHECK(empirical_kolmogorov(samples) <= dkw_radius(m, 1e-6));
}

TEST_CASE("dkw radius formula") {
    CHECK(dkw_radius(1000000, 1e-6) ==
          Catch::Approx(std::sqrt(std::log(2e6) / 2e6)).epsilon(1e-15));
    CHECK(dkw_radius(1000000, 1e-6) == Catch::Approx(0.00269338).margin(1e-7));
    CHECK(dkw_radius(100, 0.5) > dkw_radius(1000, 0.5));
    CHECK(dkw_radius(100, 1e-6) > dkw_radius(100, 1e-3));
    CHECK_THROWS_AS(dkw_radius(0, 0.5), EmptySampleError);
    CHECK_THROWS_AS(dkw_radius(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dkw_radius(10, 1.0), std::invalid_argument);
}

TEST_CASE("tv distance: truncated Poisson-shape law is almost Poisson") {
    // weights proportional to 1/k! on 0..25 differ from Poisson(1) only by
    // the remainder of the exponential series, far below 1e-10
    std::vector<BigInt> factorial(26, 1);
    for (unsigned k = 1; k <= 25; ++k) factorial[k] = factorial[k - 1] * k;
    Rational z = 0;
    for (unsigned k = 0; k <= 25; ++k) z += Rational(1, factorial[k]);
    std::vector<Pmf::Entry> entries;
    for (unsigned k = 0; k <= 25; ++k) entries.emplace_back(k, Rational(1, factorial[k]) / z);
    CHECK(tv_distance_to_poisson(Pmf::from_weights(std::move(entries)), 1.0) < 1e-10);
}

TEST_CASE("tv distance: simple-chord law against its Poisson companion") {
    // lambda_n = 2n/(2n-1); frozen oracle values from an independent
    // mpmath evaluation
    const auto tv = [](std::uint32_t n) {
        return tv_distance_to_poisson(simple_chord_pmf_exact(n),
                                      2.0 * n / (2.0 * n - 1.0));
    };
    CHECK(tv(2) == Catch::Approx(0.502094).margin(1e-5));
    CHECK(tv(10) == Catch::Approx(0.014327).margin(1e-5));
    CHECK(tv(10) < tv(2));
    CHECK_THROWS_AS(tv_distance_to_poisson(simple_chord_pmf_exact(2), 0.0),
                    std::invalid_argument);
}
