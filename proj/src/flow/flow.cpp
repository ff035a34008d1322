#include "oqe/flow/flow.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oqe::flow {

std::size_t birkhoff_sample_count(double T, double dt) {
  // k * dt < T, with T/dt treated as an integer when it is one up to rounding
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(std::max(1.0, nearest));
  return static_cast<std::size_t>(std::ceil(ratio));
}

std::mt19937_64 sub_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

FlowBackend make_flow_backend(const geom::GeometryBackend& g) {
  switch (g.kind) {
    case geom::BackendKind::sphere_quotient:
      return SphereFlow(g.sphere_n);
    case geom::BackendKind::pillowcase:
      return PillowcaseFlow();
    case geom::BackendKind::hyperbolic_triangle:
      return HyperbolicFlow<double>(g.signature.p, g.signature.q, g.signature.r);
  }
  throw UnsupportedBackend("make_flow_backend: unknown backend");
}

double ball_radius_ten_percent(int p, int q, int r) {
  const double area = geom::classify_signature(p, q, r).area;
  // hyperbolic disk area 2pi (cosh rho - 1)
  return std::acosh(1.0 + 0.1 * area / (2 * M_PI));
}

namespace {

double bump_profile(double d, double radius) {
  const double s = d / radius;
  if (s >= 1) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace

PhaseObservable make_observable(const std::string& name, const FlowBackend& b) {
  if (name == "one") return {name, [](const UnitPhasePoint<double>&) { return 1.0; }, 1.0};

  if (const auto* h = std::get_if<HyperbolicFlow<double>>(&b)) {
    const auto& tri = h->triangle();
    const geom::HalfPlanePoint<double> c = tri.incenter;
    const double vol = geom::classify_signature(tri.orders[0], tri.orders[1], tri.orders[2]).area;
    if (name == "ball") {
      const double rho = ball_radius_ten_percent(tri.orders[0], tri.orders[1], tri.orders[2]);
      return {name,
              [c, rho](const UnitPhasePoint<double>& s) {
                return geom::hyperbolic_distance(c, {s.x1, s.x2}) < rho ? 1.0 : 0.0;
              },
              0.1};
    }
    if (name == "bump") {
      const double radius = 0.9 * tri.inradius;
      const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [radius](double r) { return bump_profile(r, radius) * std::sinh(r); }, 0.0, radius, 10,
          1e-14);
      return {name,
              [c, radius](const UnitPhasePoint<double>& s) {
                return bump_profile(geom::hyperbolic_distance(c, {s.x1, s.x2}), radius);
              },
              2 * M_PI * integral / vol};
    }
  } else if (std::holds_alternative<PillowcaseFlow>(b)) {
    if (name == "cos2dir")
      return {name,
              [](const UnitPhasePoint<double>& s) {
                const double c = std::cos(s.direction);
                return c * c;
              },
              0.5};
    if (name == "cos_x1")
      return {name, [](const UnitPhasePoint<double>& s) { return std::cos(s.x1); }, 0.0};
    if (name == "cos_x2")
      return {name, [](const UnitPhasePoint<double>& s) { return std::cos(s.x2); }, 0.0};
  } else {
    if (name == "cos2theta")
      return {name,
              [](const UnitPhasePoint<double>& s) {
                const double c = std::cos(s.x1);
                return c * c;
              },
              1.0 / 3.0};
  }
  throw UnsupportedObservable("observable '" + name + "' is not available on this backend");
}

}  // namespace oqe::flow
