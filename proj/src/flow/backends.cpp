#include "oqe/flow/backends.hpp"

#include <algorithm>
#include <cmath>

#include "oqe/core/errors.hpp"

namespace oqe::flow {

namespace {

constexpr double kTwoPi = 2 * M_PI;

double mod_two_pi(double a) {
  double r = a - kTwoPi * std::floor(a / kTwoPi);
  if (r >= kTwoPi) r -= kTwoPi;
  if (r < 0) r = 0;
  return r;
}

Eigen::Matrix3d rotation_z(double a) {
  Eigen::Matrix3d m;
  const double c = std::cos(a), s = std::sin(a);
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- pillowcase

PillowcaseFlow::State PillowcaseFlow::flow(const State& s, double t) const {
  return {s.x + t * Eigen::Vector2d(std::cos(s.direction), std::sin(s.direction)), s.direction};
}

PillowcaseFlow::Element PillowcaseFlow::fold(State& s) const {
  if (!std::isfinite(s.x(0)) || !std::isfinite(s.x(1)))
    throw NumericalBlowup("pillowcase: non-finite state");
  Element g;
  Eigen::Vector2d y(mod_two_pi(s.x(0)), mod_two_pi(s.x(1)));
  if (y(1) > M_PI) {
    g.sign = -1;
    y = Eigen::Vector2d(mod_two_pi(-y(0)), kTwoPi - y(1));
  }
  g.shift = y - g.sign * s.x;
  s.x = y;
  if (g.sign < 0) s.direction = wrap_angle(s.direction + M_PI);
  return g;
}

void PillowcaseFlow::apply(const Element& g, State& s) const {
  s.x = g.sign * s.x + g.shift;
  if (g.sign < 0) s.direction = wrap_angle(s.direction + M_PI);
}

double PillowcaseFlow::separation(const State& a, const State& b) const {
  const double da = angle_difference(b.direction, a.direction);
  return std::sqrt((b.x - a.x).squaredNorm() + da * da);
}

void PillowcaseFlow::rescale(const State& ref, State& s, double factor) const {
  s.x = ref.x + factor * (s.x - ref.x);
  s.direction = ref.direction + factor * angle_difference(s.direction, ref.direction);
}

double PillowcaseFlow::quotient_distance(const Point& s, const Point& t) const {
  auto torus = [](double a, double b) {
    const double d = std::abs(angle_difference(a, b));
    return d;
  };
  const double plus = std::hypot(torus(s.x1, t.x1), torus(s.x2, t.x2));
  const double minus = std::hypot(torus(s.x1, -t.x1), torus(s.x2, -t.x2));
  return std::min(plus, minus);
}

// -------------------------------------------------------------------- sphere

SphereFlow::SphereFlow(int n) : n_(n) {
  if (n < 1) throw DomainError("SphereFlow: n must be >= 1");
}

SphereFlow::State SphereFlow::lift(const Point& s) const {
  const double st = std::sin(s.x1), ct = std::cos(s.x1);
  const double sp = std::sin(s.x2), cp = std::cos(s.x2);
  const Eigen::Vector3d x(st * cp, st * sp, ct);
  const Eigen::Vector3d e_theta(ct * cp, ct * sp, -st);
  const Eigen::Vector3d e_phi(-sp, cp, 0);
  return {x, std::cos(s.direction) * e_theta + std::sin(s.direction) * e_phi};
}

SphereFlow::Point SphereFlow::project(const State& s) const {
  const double rho = std::hypot(s.x(0), s.x(1));
  const double theta = std::atan2(rho, s.x(2));
  const double phi = rho > 0 ? mod_two_pi(std::atan2(s.x(1), s.x(0))) : 0.0;
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const Eigen::Vector3d e_theta(ct * cp, ct * sp, -st);
  const Eigen::Vector3d e_phi(-sp, cp, 0);
  return {theta, phi, mod_two_pi(std::atan2(s.v.dot(e_phi), s.v.dot(e_theta)))};
}

SphereFlow::State SphereFlow::flow(const State& s, double t) const {
  const double c = std::cos(t), sn = std::sin(t);
  State out{c * s.x + sn * s.v, -sn * s.x + c * s.v};
  // keep (x, v) orthonormal against drift
  out.x.normalize();
  out.v -= out.v.dot(out.x) * out.x;
  out.v.normalize();
  return out;
}

SphereFlow::Element SphereFlow::fold(State& s) const {
  if (!s.x.allFinite() || !s.v.allFinite()) throw NumericalBlowup("sphere: non-finite state");
  const double wedge = kTwoPi / n_;
  const double phi = mod_two_pi(std::atan2(s.x(1), s.x(0)));
  int k = static_cast<int>(std::floor(phi / wedge));
  k = std::clamp(k, 0, n_ - 1);
  apply(k, s);
  return k;
}

void SphereFlow::apply(Element k, State& s) const {
  if (k == 0) return;
  const Eigen::Matrix3d R = rotation_z(-k * kTwoPi / n_);
  s.x = R * s.x;
  s.v = R * s.v;
}

double SphereFlow::separation(const State& a, const State& b) const {
  return std::sqrt((b.x - a.x).squaredNorm() + (b.v - a.v).squaredNorm());
}

void SphereFlow::rescale(const State& ref, State& s, double factor) const {
  s.x = ref.x + factor * (s.x - ref.x);
  s.v = ref.v + factor * (s.v - ref.v);
  s.x.normalize();
  s.v -= s.v.dot(s.x) * s.x;
  s.v.normalize();
}

double SphereFlow::quotient_distance(const Point& s, const Point& t) const {
  const Eigen::Vector3d a = lift(s).x;
  const Eigen::Vector3d b = lift(t).x;
  double best = M_PI;
  for (int k = 0; k < n_; ++k) {
    const Eigen::Vector3d rb = rotation_z(k * kTwoPi / n_) * b;
    best = std::min(best, std::atan2(a.cross(rb).norm(), a.dot(rb)));
  }
  return best;
}

}  // namespace oqe::flow
