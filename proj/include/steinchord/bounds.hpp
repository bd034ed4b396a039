#pragma once

#include "steinchord/chord_diagram.hpp"
#include "steinchord/distances.hpp"
#include "steinchord/enumerate.hpp"
#include "steinchord/exact_laws.hpp"
#include "steinchord/montecarlo.hpp"
#include "steinchord/sizebias.hpp"
#include "steinchord/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace steinchord {

struct McBudget {
    std::uint64_t samples = 2000;  // outer draws (diagrams)
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::uint64_t inner = 256;  // quadruples per inner estimate (two-stage only)
};

// Exact standardization constants of the crossing count, as doubles.
inline std::pair<double, double> crossing_standardization(std::uint32_t n) {
    const auto [mean, variance] = crossing_mean_variance(n);
    return {to_double(mean), std::sqrt(to_double(variance))};
}

// Exact Kolmogorov distance between the standardized crossing count and the
// standard normal; practical wherever crossing_pmf_exact is (n <= ~60).
inline double crossing_kolmogorov_exact(std::uint32_t n) {
    const auto [mu, sigma] = crossing_standardization(n);
    return kolmogorov_distance_to_normal(crossing_pmf_exact(n), mu, sigma);
}

enum class SbMethod { Exact, MonteCarlo };

struct SbVarianceResult {
    double value = 0;                     // Var(E[X^s - X | pi]) estimate or exact value
    std::optional<Rational> exact_value;  // filled in exact mode
    double max_abs_delta = 0;             // largest |coupled - original| crossing change seen
    std::uint64_t outer_samples = 0;      // diagrams visited
    std::string method;                   // "exact", "mc-exact-inner", or "mc-two-stage"
};

namespace detail {

// Sum over all quadruples of the coupled crossing change, plus the largest
// single change, in plain integers.  Shared by the exact and the
// exact-inner Monte Carlo estimators.
struct InnerSum {
    std::int64_t sum = 0;
    std::int64_t max_abs = 0;
    std::uint64_t quads = 0;
};

inline InnerSum inner_delta_sum(const ChordDiagram& d, TableCrossingCounter& counter) {
    const Point points = d.points();
    const std::int64_t before = static_cast<std::int64_t>(count_crossings_fast(d));
    InnerSum r;
    for (Point dd = 4; dd <= points; ++dd)
        for (Point c = 3; c < dd; ++c)
            for (Point b = 2; b < c; ++b)
                for (Point a = 1; a < b; ++a) {
                    const auto table =
                        coupled_crossing_table(d, {a, b, c, dd}, CouplingCorruption::None);
                    const std::int64_t delta =
                        static_cast<std::int64_t>(counter.count(table)) - before;
                    r.sum += delta;
                    r.max_abs = std::max<std::int64_t>(r.max_abs, std::abs(delta));
                    ++r.quads;
                }
    return r;
}

inline std::uint64_t quadruple_count(std::uint32_t n) {
    const std::uint64_t m = 2ull * n;
    return m * (m - 1) * (m - 2) * (m - 3) / 24;
}

}  // namespace detail

// The quantity below is Var(E[X^s - X | pi]) for the crossing coupling — the
// computable upper bound for the variance term of the normal-approximation
// error bound.  Three estimators, each validated against the next more
// exact one in tests:
//
//  * sb_variance_exact       — full enumeration, exact rational (n <= 6);
//  * sb_variance_mc_exact_inner — diagrams sampled, Delta(pi) summed exactly
//    over every quadruple, sample variance reported;
//  * sb_variance_mc_two_stage — diagrams sampled, Delta(pi) estimated twice
//    from independent quadruple subsamples; the sample covariance of the two
//    estimates is unbiased for Var(Delta(pi)) because the inner noise terms
//    are independent with mean zero; clamped at 0.

inline SbVarianceResult sb_variance_exact(std::uint32_t n) {
    if (n < 2) throw OutOfRangeError("sb_variance_exact: n must be >= 2");
    if (n > 6)
        throw OutOfRangeError("sb_variance_exact: enumerates all diagrams; use n <= 6");
    detail::TableCrossingCounter counter(2 * n);
    BigInt sum = 0, sumsq = 0, diagrams = 0;
    std::int64_t max_abs = 0;
    std::uint64_t quads = 0;
    for_each_diagram(n, [&](const ChordDiagram& d) {
        const auto inner = detail::inner_delta_sum(d, counter);
        sum += inner.sum;
        sumsq += BigInt(inner.sum) * inner.sum;
        max_abs = std::max(max_abs, inner.max_abs);
        quads = inner.quads;
        ++diagrams;
    });
    const Rational mean_sq = Rational(sum, diagrams) * Rational(sum, diagrams);
    const Rational variance =
        (Rational(sumsq, diagrams) - mean_sq) / Rational(BigInt(quads) * quads);
    SbVarianceResult result;
    result.value = to_double(variance);
    result.exact_value = variance;
    result.max_abs_delta = static_cast<double>(max_abs);
    result.outer_samples = diagrams.convert_to<std::uint64_t>();
    result.method = "exact";
    return result;
}

inline SbVarianceResult sb_variance_mc_exact_inner(std::uint32_t n, const McBudget& budget) {
    if (n < 2) throw OutOfRangeError("sb_variance_mc_exact_inner: n must be >= 2");
    const std::uint64_t outer = budget.samples;
    if (outer < 2) throw EmptySampleError("sb_variance_mc_exact_inner: need >= 2 outer samples");
    const std::uint64_t blocks = (outer + kMcBlockSize - 1) / kMcBlockSize;
    struct Partial {
        long double sum = 0, sumsq = 0;
        double max_abs = 0;
        std::uint64_t count = 0;
    };
    const auto partials = map_blocks<Partial>(blocks, budget.workers, [&](std::uint64_t b) {
        StreamRng rng(budget.seed, b);
        detail::TableCrossingCounter counter(2 * n);
        const std::uint64_t lo = b * kMcBlockSize;
        const std::uint64_t hi = std::min(outer, lo + kMcBlockSize);
        Partial p;
        for (std::uint64_t s = lo; s < hi; ++s) {
            const ChordDiagram d = sample_uniform(n, rng);
            const auto inner = detail::inner_delta_sum(d, counter);
            const double delta = static_cast<double>(inner.sum) / static_cast<double>(inner.quads);
            p.sum += delta;
            p.sumsq += static_cast<long double>(delta) * delta;
            p.max_abs = std::max(p.max_abs, static_cast<double>(inner.max_abs));
            ++p.count;
        }
        return p;
    });
    SbVarianceResult result;
    long double sum = 0, sumsq = 0;
    for (const auto& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
        result.max_abs_delta = std::max(result.max_abs_delta, p.max_abs);
    }
    const long double m = static_cast<long double>(outer);
    const long double var = (sumsq - sum * sum / m) / (m - 1);
    result.value = std::max(0.0, static_cast<double>(var));
    result.outer_samples = outer;
    result.method = "mc-exact-inner";
    return result;
}

inline SbVarianceResult sb_variance_mc_two_stage(std::uint32_t n, const McBudget& budget) {
    if (n < 2) throw OutOfRangeError("sb_variance_mc_two_stage: n must be >= 2");
    const std::uint64_t outer = budget.samples;
    if (outer < 2) throw EmptySampleError("sb_variance_mc_two_stage: need >= 2 outer samples");
    const std::uint64_t inner = std::max<std::uint64_t>(budget.inner, 2);
    const std::uint64_t blocks = (outer + kMcBlockSize - 1) / kMcBlockSize;
    const Point points = 2 * n;
    struct Partial {
        long double sum1 = 0, sum2 = 0, cross = 0;
        double max_abs = 0;
        std::uint64_t count = 0;
    };
    const auto partials = map_blocks<Partial>(blocks, budget.workers, [&](std::uint64_t b) {
        StreamRng rng(budget.seed, b);
        detail::TableCrossingCounter counter(points);
        const std::uint64_t lo = b * kMcBlockSize;
        const std::uint64_t hi = std::min(outer, lo + kMcBlockSize);
        Partial p;
        std::array<Point, 4> pick{};
        for (std::uint64_t s = lo; s < hi; ++s) {
            const ChordDiagram d = sample_uniform(n, rng);
            const std::int64_t before = static_cast<std::int64_t>(count_crossings_fast(d));
            double estimates[2];
            for (double& est : estimates) {
                std::int64_t sum = 0;
                for (std::uint64_t q = 0; q < inner; ++q) {
                    std::size_t filled = 0;
                    while (filled < 4) {
                        const Point candidate = static_cast<Point>(rng.uniform_below(points)) + 1;
                        bool fresh = true;
                        for (std::size_t t = 0; t < filled; ++t)
                            if (pick[t] == candidate) fresh = false;
                        if (fresh) pick[filled++] = candidate;
                    }
                    std::sort(pick.begin(), pick.end());
                    const auto table = detail::coupled_crossing_table(
                        d, {pick[0], pick[1], pick[2], pick[3]}, CouplingCorruption::None);
                    const std::int64_t delta =
                        static_cast<std::int64_t>(counter.count(table)) - before;
                    sum += delta;
                    p.max_abs = std::max(p.max_abs, static_cast<double>(std::abs(delta)));
                }
                est = static_cast<double>(sum) / static_cast<double>(inner);
            }
            p.sum1 += estimates[0];
            p.sum2 += estimates[1];
            p.cross += static_cast<long double>(estimates[0]) * estimates[1];
            ++p.count;
        }
        return p;
    });
    SbVarianceResult result;
    long double sum1 = 0, sum2 = 0, cross = 0;
    for (const auto& p : partials) {
        sum1 += p.sum1;
        sum2 += p.sum2;
        cross += p.cross;
        result.max_abs_delta = std::max(result.max_abs_delta, p.max_abs);
    }
    const long double m = static_cast<long double>(outer);
    const long double cov = (cross - sum1 * sum2 / m) / (m - 1);
    result.value = std::max(0.0, static_cast<double>(cov));
    result.outer_samples = outer;
    result.method = "mc-two-stage";
    return result;
}

// Exact enumeration is only feasible while C(2n,4) quadruples times (2n-1)!!
// diagrams stays small; the Monte Carlo estimator keeps the exact inner sum
// while the quadruple count is below this limit (n <= 8) and switches to the
// two-stage covariance estimator beyond it.
inline constexpr std::uint64_t kExactInnerQuadrupleLimit = 2048;

inline SbVarianceResult sb_variance_term(std::uint32_t n, SbMethod method,
                                         const McBudget& budget = {}) {
    if (method == SbMethod::Exact) return sb_variance_exact(n);
    if (detail::quadruple_count(n) <= kExactInnerQuadrupleLimit)
        return sb_variance_mc_exact_inner(n, budget);
    return sb_variance_mc_two_stage(n, budget);
}

enum class BoundMode { Theoretical, Empirical };

// Evaluation of the size-bias normal-approximation bound
//   d_K(W, Z) <= (2 mu / sigma^2) sqrt(Var(E[X^s - X | .])) + 8 mu B^2 / sigma^3,
// where B bounds |X^s - X|.  The second term is stated without an
// expectation; the two readings implemented here are the almost-sure bound
// B = 4n (theoretical mode) and the observed maximum (empirical mode), and
// second_term_form records which one produced the report.
struct BoundReport {
    std::uint32_t n = 0;
    std::string mode;                  // "theoretical" or "empirical"
    double term1 = 0;                  // variance term
    double term2 = 0;                  // second (increment-range) term
    double total = 0;
    double variance_term = 0;          // Var(E[X^s - X | pi]) value used
    double max_abs_delta = 0;          // B used in term2
    std::string second_term_form;      // "almost-sure-bound-4n" or "observed-maximum"
    std::optional<double> comparison;  // exact d_K(W_n, Z) when computable
};

// Theoretical mode reproduces the proof chain mu <= n^2/6, sigma^2 >= n^3/45,
// Var <= (432)^2 n, |X^s - X| <= 4n, giving
//   term1 = 6480/sqrt(n), term2 = (64/3) 45^(3/2)/sqrt(n),
// whose sum stays below 12920/sqrt(n).  Empirical mode substitutes exact
// mu_n, sigma_n, the measured variance term, and the observed maximum
// increment.
inline BoundReport stein_normal_bound(std::uint32_t n, BoundMode mode, const McBudget& budget = {},
                                      bool with_comparison = true) {
    if (n < 2) throw OutOfRangeError("stein_normal_bound: n must be >= 2");
    BoundReport report;
    report.n = n;
    const double dn = static_cast<double>(n);

    if (mode == BoundMode::Theoretical) {
        report.mode = "theoretical";
        report.second_term_form = "almost-sure-bound-4n";
        const double mu_upper = dn * dn / 6.0;
        const double sigma2_lower = dn * dn * dn / 45.0;
        report.variance_term = 432.0 * 432.0 * dn;
        report.max_abs_delta = 4.0 * dn;
        report.term1 = 2.0 * mu_upper / sigma2_lower * std::sqrt(report.variance_term);
        report.term2 = 8.0 * mu_upper * report.max_abs_delta * report.max_abs_delta /
                       std::pow(sigma2_lower, 1.5);
    } else {
        report.mode = "empirical";
        report.second_term_form = "observed-maximum";
        const auto [mean, variance] = crossing_mean_variance(n);
        const double mu = to_double(mean);
        const double sigma2 = to_double(variance);
        const SbVarianceResult var_result = n <= 6
                                                ? sb_variance_exact(n)
                                                : sb_variance_term(n, SbMethod::MonteCarlo, budget);
        report.variance_term = var_result.value;
        report.max_abs_delta = var_result.max_abs_delta;
        report.term1 = 2.0 * mu / sigma2 * std::sqrt(report.variance_term);
        report.term2 =
            8.0 * mu * report.max_abs_delta * report.max_abs_delta / std::pow(sigma2, 1.5);
    }
    report.total = report.term1 + report.term2;
    if (with_comparison && n <= 60) report.comparison = crossing_kolmogorov_exact(n);
    return report;
}

// The three exact pieces of the Poisson-approximation bound for the
// simple-chord count: 2n/(2n-1)^2 + 8n/(2n-1)^2 = 10n/(2n-1)^2.
struct TvBoundSimple {
    Rational term1;
    Rational term2;
    Rational total;
};

inline TvBoundSimple tv_bound_simple(std::uint32_t n) {
    if (n == 0) throw OutOfRangeError("tv_bound_simple: n must be >= 1");
    const BigInt odd = 2 * BigInt(n) - 1;
    TvBoundSimple b;
    b.term1 = Rational(2 * BigInt(n), odd * odd);
    b.term2 = Rational(8 * BigInt(n), odd * odd);
    b.total = b.term1 + b.term2;
    return b;
}

}  // namespace steinchord
