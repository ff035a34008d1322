#pragma once

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oqe {

/// 100 decimal digits. Used where chaotic amplification (e^t over t ~ 100)
/// would otherwise swamp double rounding.
using HighPrecision = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<100>, boost::multiprecision::et_off>;

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real two_pi() {
  return boost::math::constants::two_pi<Real>();
}

/// Reduces an angle to [0, 2pi).
template <class Real>
Real wrap_angle(Real a) {
  using std::floor;
  const Real period = two_pi<Real>();
  a -= period * floor(a / period);
  if (a >= period) a -= period;
  if (a < Real(0)) a = Real(0);
  return a;
}

/// Signed difference a - b reduced to [-pi, pi).
template <class Real>
Real angle_difference(Real a, Real b) {
  return wrap_angle<Real>(a - b + pi<Real>()) - pi<Real>();
}

inline double to_double(double x) { return x; }
inline double to_double(const HighPrecision& x) { return x.convert_to<double>(); }

}  // namespace oqe
