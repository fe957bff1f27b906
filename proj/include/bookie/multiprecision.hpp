#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <limits>

namespace bookie {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

// Fixed-precision MPFR floats used when long double cannot certify a result.
template <unsigned Digits10>
using MpFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits10>,
                                  boost::multiprecision::et_off>;

template <class R>
inline constexpr bool is_exact_v = std::numeric_limits<R>::is_exact;

// Unit roundoff of a floating type, as a double. Zero for exact types.
template <class R>
double unit_roundoff() {
  if constexpr (is_exact_v<R>) {
    return 0.0;
  } else {
    return static_cast<double>(std::numeric_limits<R>::epsilon()) / 2.0;
  }
}

template <class R>
double to_double(const R& x) {
  if constexpr (std::is_arithmetic_v<R>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

// Builds an R from a double without rounding (every double is a dyadic rational).
template <class R>
R from_double(double x) {
  return R(x);
}

}  // namespace bookie
