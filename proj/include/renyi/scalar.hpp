#pragma once

// Scalar support for the two working precisions: IEEE double and binary128
// (GCC __float128 backed by libquadmath). Templates call renyi::math::* so
// both precisions resolve to the right elementary functions.

#include <cmath>
#include <limits>

#include <quadmath.h>

namespace renyi {

using quad = __float128;

namespace math {

inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double exp(double x) { return std::exp(x); }
inline double abs(double x) { return std::fabs(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline bool isfinite(double x) { return std::isfinite(x); }

inline quad log(quad x) { return logq(x); }
inline quad log1p(quad x) { return log1pq(x); }
inline quad exp(quad x) { return expq(x); }
inline quad abs(quad x) { return fabsq(x); }
inline quad sqrt(quad x) { return sqrtq(x); }
inline bool isfinite(quad x) { return finiteq(x) != 0; }

template <typename Real>
constexpr Real epsilon();

template <>
constexpr double epsilon<double>() { return 2.220446049250313e-16; }

template <>
constexpr quad epsilon<quad>() { return FLT128_EPSILON; }

} // namespace math
} // namespace renyi
