#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oqe/core/scalar.hpp"
#include "oqe/geom/hyperbolic_triangle.hpp"

namespace oqe::flow {

/// Point (x, xi) of the unit cosphere bundle over the fundamental domain.
/// Base coordinates depend on the backend:
///   hyperbolic: (x, y) in the upper half-plane, direction measured from +x;
///   pillowcase: (x1, x2) in [0, 2pi) x [0, pi], direction measured from +x1;
///   sphere: (theta, phi) polar/azimuth, direction from e_theta toward e_phi.
template <class Real>
struct UnitPhasePoint {
  Real x1{0};
  Real x2{0};
  Real direction{0};
};

template <class Real>
UnitPhasePoint<double> to_double(const UnitPhasePoint<Real>& s) {
  return {oqe::to_double(s.x1), oqe::to_double(s.x2), oqe::to_double(s.direction)};
}

/// Each backend exposes the same static interface:
///   State lift(point), point project(State)
///   State flow(State, t)            unfolded closed-form geodesic motion
///   Element fold(State&)            folds in place, returns the deck element used
///   void apply(Element, State&)     applies a deck element
///   separation / rescale            phase-space distance for shadow trajectories
///   quotient_distance               base-point distance on the quotient
///   sample_liouville(rng)           Liouville-distributed start
///   max_step()                      longest sub-step between folds

/// Geodesic flow on H^2 / D+(p,q,r). The state is a frame F in SL2(R):
/// base F.i, unit vector dF(i) applied to the upward vertical.
template <class Real>
class HyperbolicFlow {
 public:
  using real_type = Real;
  using State = geom::Matrix2<Real>;
  using Element = geom::Matrix2<Real>;
  using Point = UnitPhasePoint<Real>;

  HyperbolicFlow(int p, int q, int r) : tri_(geom::build_hyperbolic_triangle<Real>(p, q, r)) {
    using std::atanh;
    using std::cosh;
    using std::exp;
    using std::sinh;
    // The kite lies in the disk-model ball |w| <= max(rb, rc) about the origin (= i).
    const Real rho = tri_.disk_radius_b > tri_.disk_radius_c ? tri_.disk_radius_b : tri_.disk_radius_c;
    const Real R = Real(2) * atanh(rho);
    x_half_ = sinh(R) * Real(1.001);
    y_lo_ = exp(-R) * Real(0.999);
    y_hi_ = exp(R) * Real(1.001);
  }

  const geom::HyperbolicTriangle<Real>& triangle() const { return tri_; }
  Real max_step() const { return Real(1); }

  State lift(const Point& s) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Real sy = sqrt(s.x2);
    const Real alpha = (s.direction - pi<Real>() / Real(2)) / Real(2);
    const Real c = cos(alpha), sn = sin(alpha);
    // n(x) a(y) k(alpha)
    const State na{sy, s.x1 / sy, Real(0), Real(1) / sy};
    return na * State{c, sn, -sn, c};
  }

  Point project(const State& F) const {
    using std::atan2;
    const Real den = F.c * F.c + F.d * F.d;
    return {(F.a * F.c + F.b * F.d) / den, Real(1) / den,
            wrap_angle<Real>(pi<Real>() / Real(2) - Real(2) * atan2(F.c, F.d))};
  }

  State flow(const State& F, Real t) const {
    using std::exp;
    const Real e = exp(t / Real(2));
    return State{F.a * e, F.b / e, F.c * e, F.d / e};
  }

  Element fold(State& F) const {
    const geom::HalfPlanePoint<Real> z = base(F);
    const auto res = geom::fold_to_domain(tri_, z);
    const Element g = res.element.matrix();
    F = (g * F).unimodular();
    return g;
  }

  void apply(const Element& g, State& F) const { F = (g * F).unimodular(); }

  /// Frobenius norm of F^-1 G - (+-I); left invariant.
  Real separation(const State& F, const State& G) const {
    using std::sqrt;
    const State X = State{F.d, -F.b, -F.c, F.a} * G;
    const Real p = (X.a - 1) * (X.a - 1) + X.b * X.b + X.c * X.c + (X.d - 1) * (X.d - 1);
    const Real m = (X.a + 1) * (X.a + 1) + X.b * X.b + X.c * X.c + (X.d + 1) * (X.d + 1);
    return sqrt(p < m ? p : m);
  }

  /// Moves G toward F so that F^-1 G - I shrinks by `factor`.
  void rescale(const State& F, State& G, Real factor) const {
    State X = State{F.d, -F.b, -F.c, F.a} * G;
    const Real s = X.a + X.d >= Real(0) ? Real(1) : Real(-1);
    X = State{s * X.a, s * X.b, s * X.c, s * X.d};
    const State Y{Real(1) + factor * (X.a - Real(1)), factor * X.b, factor * X.c,
                  Real(1) + factor * (X.d - Real(1))};
    G = (F * Y).unimodular();
  }

  Real quotient_distance(const Point& s, const Point& t) const {
    return geom::quotient_distance(tri_, geom::HalfPlanePoint<Real>{s.x1, s.x2},
                                   geom::HalfPlanePoint<Real>{t.x1, t.x2});
  }

  /// Rejection sampling on a half-plane box with density dx dy / y^2.
  template <class Rng>
  Point sample_liouville(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Real inv_lo = Real(1) / y_lo_, inv_hi = Real(1) / y_hi_;
    for (;;) {
      const Real x = x_half_ * Real(2.0 * u(rng) - 1.0);
      const Real y = Real(1) / (inv_lo - Real(u(rng)) * (inv_lo - inv_hi));
      const geom::HalfPlanePoint<Real> z{x, y};
      if (!tri_.in_domain(z, Real(0))) continue;
      return {x, y, two_pi<Real>() * Real(u(rng))};
    }
  }

  static geom::HalfPlanePoint<Real> base(const State& F) {
    const Real den = F.c * F.c + F.d * F.d;
    return {(F.a * F.c + F.b * F.d) / den, Real(1) / den};
  }

 private:
  geom::HyperbolicTriangle<Real> tri_;
  Real x_half_{0}, y_lo_{0}, y_hi_{0};
};

/// Straight-line flow on the pillowcase (R/2piZ)^2 / {+-1}.
class PillowcaseFlow {
 public:
  using real_type = double;
  struct State {
    Eigen::Vector2d x;
    double direction;
  };
  /// x -> sign * x + shift, direction -> direction + (sign < 0 ? pi : 0)
  struct Element {
    int sign{1};
    Eigen::Vector2d shift{0, 0};
  };
  using Point = UnitPhasePoint<double>;

  double max_step() const { return 1.0; }
  State lift(const Point& s) const { return {Eigen::Vector2d(s.x1, s.x2), s.direction}; }
  Point project(const State& s) const { return {s.x(0), s.x(1), wrap_angle(s.direction)}; }
  State flow(const State& s, double t) const;
  Element fold(State& s) const;
  void apply(const Element& g, State& s) const;
  double separation(const State& a, const State& b) const;
  void rescale(const State& ref, State& s, double factor) const;
  double quotient_distance(const Point& s, const Point& t) const;

  template <class Rng>
  Point sample_liouville(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {2 * M_PI * u(rng), M_PI * u(rng), 2 * M_PI * u(rng)};
  }
};

/// Great-circle flow on S^2 modulo rotation by 2pi/n about the z-axis.
class SphereFlow {
 public:
  using real_type = double;
  struct State {
    Eigen::Vector3d x;
    Eigen::Vector3d v;
  };
  /// rotation by -k * 2pi/n about the z-axis
  using Element = int;
  using Point = UnitPhasePoint<double>;

  explicit SphereFlow(int n);
  int n() const { return n_; }
  double max_step() const { return 1.0; }
  State lift(const Point& s) const;
  Point project(const State& s) const;
  State flow(const State& s, double t) const;
  Element fold(State& s) const;
  void apply(Element k, State& s) const;
  double separation(const State& a, const State& b) const;
  void rescale(const State& ref, State& s, double factor) const;
  double quotient_distance(const Point& s, const Point& t) const;

  template <class Rng>
  Point sample_liouville(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double z = 2 * u(rng) - 1;
    return {std::acos(z), 2 * M_PI / n_ * u(rng), 2 * M_PI * u(rng)};
  }

 private:
  int n_;
};

}  // namespace oqe::flow
