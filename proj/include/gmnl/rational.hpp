#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>

#include "gmnl/core.hpp"

namespace gmnl {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Exact conversion; every finite double is a dyadic rational.
inline Rat exact_rational(double v) {
  if (!std::isfinite(v)) throw InputError("cannot convert non-finite value to rational");
  if (v == 0.0) return Rat(0);
  int exp = 0;
  const double m = std::frexp(v, &exp);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mant);
  BigInt two = 1;
  two <<= std::abs(exp);
  if (exp >= 0)
    r *= Rat(two);
  else
    r /= Rat(two);
  return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace gmnl
