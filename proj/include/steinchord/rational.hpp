#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace steinchord {

// Exact arithmetic used by every small-n identity in the library.  Floats
// appear only when comparing against continuous reference laws.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// m!! for m >= -1, with (-1)!! = 0!! = 1.  The library only ever needs odd
// arguments ((2n-1)!! counts the chord diagrams of size n), but the product
// definition is the same for even m.
inline BigInt double_factorial(std::int64_t m) {
    if (m < -1) throw std::invalid_argument("double_factorial: m must be >= -1");
    BigInt result = 1;
    for (std::int64_t v = m; v > 1; v -= 2) result *= v;
    return result;
}

// Number of chord diagrams on 2n points: (2n-1)!!.
inline BigInt diagram_count(std::uint32_t n) {
    return double_factorial(2 * static_cast<std::int64_t>(n) - 1);
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

inline BigInt catalan(std::uint32_t n) {
    return binomial(2ull * n, n) / (n + 1);
}

// Canonical fraction rendering: "p/q" in lowest terms, "p" when q == 1.
inline std::string to_fraction_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    std::string s = num.str();
    if (den != 1) {
        s += '/';
        s += den.str();
    }
    return s;
}

inline Rational parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace steinchord
