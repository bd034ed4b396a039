#pragma once

#include "steinchord/pmf.hpp"
#include "steinchord/rational.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace steinchord {

struct EmptySampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Standard normal CDF via erfc: Phi(x) = erfc(-x/sqrt(2))/2.  libm's erfc is
// accurate to a few ulp, so the absolute error is far below the 1e-12 the
// distance computations budget for.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Poisson mass e^(-lambda) lambda^k / k!, evaluated in the log domain so
// large k stay accurate (relative error ~1e-13).
inline double poisson_pmf(double lambda, std::uint64_t k) {
    if (!(lambda > 0)) throw std::invalid_argument("poisson_pmf: lambda must be positive");
    return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

// sup_x |F_p(x) - Phi((x - mu)/sigma)|.  The supremum over the real line is
// attained at an atom of p, approaching from the left or the right, so it
// suffices to compare Phi against the CDF value and its left limit at every
// support point.  The discrete CDF is accumulated exactly; floats enter only
// in the final comparison.
inline double kolmogorov_distance_to_normal(const Pmf& p, double mu, double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("kolmogorov_distance_to_normal: sigma must be positive");
    Rational cdf = 0;
    double best = 0;
    for (const auto& [value, weight] : p.entries()) {
        const double z = (static_cast<double>(value) - mu) / sigma;
        const double phi = normal_cdf(z);
        best = std::max(best, std::abs(to_double(cdf) - phi));  // left limit
        cdf += weight;
        best = std::max(best, std::abs(to_double(cdf) - phi));
    }
    assert(best >= 0 && best <= 1 + 1e-9);
    return best;
}

// sup over the sorted sample of |ECDF - Phi|, including left limits; ties
// are grouped, so the result is invariant under input order.
inline double empirical_kolmogorov(std::vector<double> samples) {
    if (samples.empty()) throw EmptySampleError("empirical_kolmogorov: no samples");
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double best = 0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double phi = normal_cdf(samples[i]);
        best = std::max(best, std::abs(static_cast<double>(i) / m - phi));
        best = std::max(best, std::abs(static_cast<double>(j) / m - phi));
        i = j;
    }
    assert(best >= 0 && best <= 1 + 1e-9);
    return best;
}

// DKW confidence radius: an ECDF over m samples is uniformly within
// sqrt(ln(2/delta)/(2m)) of the true CDF with probability >= 1 - delta.
inline double dkw_radius(std::uint64_t m, double delta) {
    if (m == 0) throw EmptySampleError("dkw_radius: m must be >= 1");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("dkw_radius: delta in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

// (1/2) sum_k |p(k) - Poisson_lambda(k)|.  The Poisson tail beyond the
// summation cutoff K contributes exactly (1 - Q(K))/2 because p has no mass
// there; K is pushed until that tail is below 1e-12, keeping the absolute
// error of the reported value under 1e-10.
inline double tv_distance_to_poisson(const Pmf& p, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("tv_distance_to_poisson: lambda must be positive");
    const std::uint64_t support_max = p.max_support();
    double l1 = 0;
    double poisson_mass = 0;
    std::uint64_t k = 0;
    for (;;) {
        const double q = poisson_pmf(lambda, k);
        poisson_mass += q;
        l1 += std::abs(to_double(p.at(k)) - q);
        if (k >= support_max && 1.0 - poisson_mass <= 1e-12) break;
        ++k;
        if (k > support_max + 10000)
            throw std::runtime_error("tv_distance_to_poisson: tail failed to converge");
    }
    const double tv = 0.5 * l1 + 0.5 * std::max(0.0, 1.0 - poisson_mass);
    assert(tv >= 0 && tv <= 1 + 1e-9);
    return tv;
}

}  // namespace steinchord
