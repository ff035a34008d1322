#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

#include "oqe/core/errors.hpp"
#include "oqe/core/scalar.hpp"

namespace oqe::geom {

/// Point of the upper half-plane, z = x + i y with y > 0.
template <class Real>
struct HalfPlanePoint {
  Real x{0};
  Real y{1};
};

/// Real 2x2 matrix acting by linear fractional maps. Orientation-reversing
/// isometries (det -1) act on the conjugate: z -> (a conj(z) + b)/(c conj(z) + d).
template <class Real>
struct Matrix2 {
  Real a{1}, b{0}, c{0}, d{1};

  Real det() const { return a * d - b * c; }

  Matrix2 operator*(const Matrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  /// Rescales to |det| = 1.
  Matrix2 unimodular() const {
    using std::abs;
    using std::sqrt;
    const Real s = sqrt(abs(det()));
    return {a / s, b / s, c / s, d / s};
  }
};

/// z -> (a z + b)/(c z + d) for det > 0, or the same map applied to conj(z) for det < 0.
template <class Real>
HalfPlanePoint<Real> act(const Matrix2<Real>& m, const HalfPlanePoint<Real>& z) {
  const Real det = m.det();
  const Real y = det > Real(0) ? z.y : -z.y;
  const Real re = m.c * z.x + m.d;
  const Real im = m.c * y;
  const Real den = re * re + im * im;
  const Real num_re = m.a * z.x + m.b;
  const Real num_im = m.a * y;
  using std::abs;
  return {(num_re * re + num_im * im) / den, abs(det) * z.y / den};
}

/// Orientation-preserving isometry of the hyperbolic plane, an element of PSL(2, R).
template <class Real>
struct Mobius {
  Real a{1}, b{0}, c{0}, d{1};

  static Mobius identity() { return {Real(1), Real(0), Real(0), Real(1)}; }

  static Mobius from_matrix(const Matrix2<Real>& m) {
    if (!(m.det() > Real(0))) throw DomainError("Mobius: matrix must have positive determinant");
    const Matrix2<Real> u = m.unimodular();
    return {u.a, u.b, u.c, u.d};
  }

  Matrix2<Real> matrix() const { return {a, b, c, d}; }

  Real det() const { return a * d - b * c; }

  Mobius inverse() const { return {d, -b, -c, a}; }

  HalfPlanePoint<Real> apply(const HalfPlanePoint<Real>& z) const { return act(matrix(), z); }

  /// Argument of g'(z) = 1/(cz+d)^2; rotates tangent directions.
  Real derivative_arg(const HalfPlanePoint<Real>& z) const {
    using std::atan2;
    return Real(-2) * atan2(c * z.y, c * z.x + d);
  }

  /// |g'(z)|, the conformal scale factor of the chart.
  Real derivative_abs(const HalfPlanePoint<Real>& z) const {
    const Real re = c * z.x + d;
    const Real im = c * z.y;
    return Real(1) / (re * re + im * im);
  }

  Mobius renormalized() const {
    using std::abs;
    using std::sqrt;
    const Real s = sqrt(abs(det()));
    return {a / s, b / s, c / s, d / s};
  }
};

/// Composition (g * h)(z) = g(h(z)), renormalized to unit determinant.
template <class Real>
Mobius<Real> operator*(const Mobius<Real>& g, const Mobius<Real>& h) {
  Mobius<Real> r{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c,
                 g.c * h.b + g.d * h.d};
  return r.renormalized();
}

/// Entrywise max distance between g and h in PSL(2, R), identifying M with -M.
template <class Real>
Real transform_distance(const Mobius<Real>& g, const Mobius<Real>& h) {
  using std::abs;
  using std::max;
  const Real plus = max(max(abs(g.a - h.a), abs(g.b - h.b)), max(abs(g.c - h.c), abs(g.d - h.d)));
  const Real minus = max(max(abs(g.a + h.a), abs(g.b + h.b)), max(abs(g.c + h.c), abs(g.d + h.d)));
  return plus < minus ? plus : minus;
}

template <class Real>
bool same_transform(const Mobius<Real>& g, const Mobius<Real>& h, Real tol) {
  return transform_distance(g, h) <= tol;
}

template <class Real>
std::ostream& operator<<(std::ostream& os, const Mobius<Real>& g) {
  return os << "[[" << g.a << ", " << g.b << "], [" << g.c << ", " << g.d << "]]";
}

/// Hyperbolic distance in the upper half-plane (curvature -1).
template <class Real>
Real hyperbolic_distance(const HalfPlanePoint<Real>& z, const HalfPlanePoint<Real>& w) {
  if (!(z.y > Real(0)) || !(w.y > Real(0)))
    throw DomainError("hyperbolic_distance: points must have positive imaginary part");
  using std::asinh;
  using std::sqrt;
  const Real dx = z.x - w.x;
  const Real dy = z.y - w.y;
  const Real chord = sqrt(dx * dx + dy * dy);
  return Real(2) * asinh(chord / (Real(2) * sqrt(z.y * w.y)));
}

/// Cayley map from the Poincare disk to the upper half-plane, w -> i(1+w)/(1-w).
template <class Real>
HalfPlanePoint<Real> disk_to_half_plane(Real u, Real v) {
  // i(1+w)/(1-w) with w = u + iv
  const Real den = (Real(1) - u) * (Real(1) - u) + v * v;
  return {Real(-2) * v / den, (Real(1) - u * u - v * v) / den};
}

/// Inverse Cayley map, z -> (z - i)/(z + i). Returns (u, v).
template <class Real>
std::pair<Real, Real> half_plane_to_disk(const HalfPlanePoint<Real>& z) {
  const Real den = z.x * z.x + (z.y + Real(1)) * (z.y + Real(1));
  return {(z.x * z.x + z.y * z.y - Real(1)) / den, Real(-2) * z.x / den};
}

}  // namespace oqe::geom
