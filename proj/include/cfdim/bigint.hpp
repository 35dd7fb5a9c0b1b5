#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cfdim {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Natural log of a positive BigInt, valid far beyond double range.
inline double log_big(const BigInt& n) {
    if (n <= 0) return -std::numeric_limits<double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(n);
    if (bits < 900) return std::log(n.convert_to<double>());
    const BigInt top = n >> static_cast<int>(bits - 64);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 64) * std::numbers::ln2;
}

inline double log_big(const BigRat& r) {
    return log_big(boost::multiprecision::numerator(r)) - log_big(boost::multiprecision::denominator(r));
}

inline double to_double(const BigRat& r) { return r.convert_to<double>(); }

} // namespace cfdim
