#include "oqe/qe/observable.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "oqe/core/errors.hpp"
#include "oqe/geom/hyperbolic_triangle.hpp"
#include "oqe/qe/quadrature.hpp"
#include "oqe/spectral/fem.hpp"
#include "oqe/spectral/mesh.hpp"

namespace oqe::qe {

Observable Observable::position(std::string name, std::function<double(double, double)> f,
                                std::optional<double> exact_average) {
  Observable o;
  o.name = std::move(name);
  o.kind = ObservableKind::position;
  o.f = std::move(f);
  o.exact_average = exact_average;
  return o;
}

Observable Observable::direction(std::string name, std::function<double(double)> a,
                                 std::optional<double> exact_average) {
  Observable o;
  o.name = std::move(name);
  o.kind = ObservableKind::direction;
  o.a = std::move(a);
  o.exact_average = exact_average;
  return o;
}

Observable operator+(const Observable& x, const Observable& y) {
  if (x.kind != y.kind) throw UnsupportedObservable("cannot add a position and a direction observable");
  Observable o;
  o.name = x.name + "+" + y.name;
  o.kind = x.kind;
  if (x.kind == ObservableKind::position) {
    o.f = [f = x.f, g = y.f](double a, double b) { return f(a, b) + g(a, b); };
  } else {
    o.a = [f = x.a, g = y.a](double t) { return f(t) + g(t); };
  }
  if (x.exact_average && y.exact_average) o.exact_average = *x.exact_average + *y.exact_average;
  if (x.sup_bound && y.sup_bound) o.sup_bound = *x.sup_bound + *y.sup_bound;
  return o;
}

namespace {

double bump(double d, double radius) {
  const double s = d / radius;
  if (s >= 1) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

/// Bump of hyperbolic radius R about a point whose local group has order `order`.
Observable hyperbolic_bump(std::string name, geom::HalfPlanePoint<double> c, double R, int order, double vol) {
  const double radial = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [R](double r) { return bump(r, R) * std::sinh(r); }, 0.0, R, 10, 1e-14);
  Observable o = Observable::position(
      std::move(name), [c, R](double x, double y) { return bump(geom::hyperbolic_distance(c, {x, y}), R); },
      2 * M_PI / order * radial / vol);
  o.sup_bound = 1.0;
  return o;
}

Observable with_bound(Observable o, double bound) {
  o.sup_bound = bound;
  return o;
}

}  // namespace

Observable make_qe_observable(const std::string& name, const geom::GeometryBackend& backend) {
  if (name == "one") return with_bound(Observable::position(name, [](double, double) { return 1.0; }, 1.0), 1.0);
  switch (backend.kind) {
    case geom::BackendKind::sphere_quotient: {
      const int n = backend.sphere_n;
      if (name == "cos_theta")
        return with_bound(Observable::position(name, [](double t, double) { return std::cos(t); }, 0.0), 1.0);
      if (name == "cos2theta")
        return with_bound(Observable::position(
                              name, [](double t, double) { return std::cos(t) * std::cos(t); }, 1.0 / 3.0),
                          1.0);
      if (name == "zonal_exp")
        return with_bound(
            Observable::position(name, [](double t, double) { return std::exp(std::cos(t)); }, std::sinh(1.0)),
            std::exp(1.0));
      if (name == "sectoral")
        return with_bound(Observable::position(
                              name,
                              [n](double t, double p) {
                                const double s = std::sin(t);
                                return 1.0 + s * s * std::cos(n * p);
                              },
                              1.0),
                          2.0);
      break;
    }
    case geom::BackendKind::pillowcase: {
      if (name == "cos_x1")
        return with_bound(Observable::position(name, [](double x, double) { return std::cos(x); }, 0.0), 1.0);
      if (name == "exp_cos") {
        const double i0 = boost::math::cyl_bessel_i(0, 1.0);
        return with_bound(Observable::position(
                              name, [](double x, double y) { return std::exp(std::cos(x) + std::cos(y)); },
                              i0 * i0),
                          std::exp(2.0));
      }
      if (name == "cos2dir")
        return with_bound(Observable::direction(
                              name,
                              [](double t) {
                                const double c = std::cos(t);
                                return c * c;
                              },
                              0.5),
                          1.0);
      if (name == "cos4dir")
        return with_bound(Observable::direction(
                              name,
                              [](double t) {
                                const double c = std::cos(t);
                                return c * c * c * c;
                              },
                              3.0 / 8.0),
                          1.0);
      break;
    }
    case geom::BackendKind::hyperbolic_triangle: {
      const auto& s = backend.signature;
      const auto tri = geom::build_hyperbolic_triangle<double>(s.p, s.q, s.r);
      const double vol = backend.volume();
      if (name == "ball") {
        const double rho = std::acosh(1.0 + 0.1 * vol / (2 * M_PI));
        const auto c = tri.incenter;
        return with_bound(
            Observable::position(
                name, [c, rho](double x, double y) { return geom::hyperbolic_distance(c, {x, y}) < rho ? 1.0 : 0.0; },
                0.1),
            1.0);
      }
      if (name == "bump_a")
        return hyperbolic_bump(name, tri.vertices[0], 0.9 * tri.sides[0].distance(tri.vertices[0]), s.p, vol);
      if (name == "bump_b")
        return hyperbolic_bump(name, tri.vertices[1], 0.9 * tri.sides[1].distance(tri.vertices[1]), s.q, vol);
      if (name == "bump_in") return hyperbolic_bump(name, tri.incenter, 0.9 * tri.inradius, 1, vol);
      break;
    }
  }
  throw UnsupportedObservable("observable '" + name + "' is not available on backend " + backend.tag());
}

std::vector<std::string> test_observable_names(geom::BackendKind kind) {
  switch (kind) {
    case geom::BackendKind::sphere_quotient:
      return {"cos2theta", "zonal_exp", "sectoral"};
    case geom::BackendKind::pillowcase:
      return {"exp_cos", "cos2dir", "cos4dir"};
    case geom::BackendKind::hyperbolic_triangle:
      return {"bump_a", "bump_b", "bump_in"};
  }
  return {};
}

double liouville_average(const Observable& obs, const geom::GeometryBackend& backend) {
  if (obs.exact_average) return *obs.exact_average;
  if (obs.kind == ObservableKind::direction) {
    const int n = 4096;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += obs.a(2 * M_PI * i / n);
    return acc / n;
  }
  switch (backend.kind) {
    case geom::BackendKind::sphere_quotient: {
      const auto gl = gauss_legendre(160);
      const int nphi = 320;
      double acc = 0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double t = std::acos(gl.nodes[k]);
        double row = 0;
        for (int j = 0; j < nphi; ++j) row += obs.f(t, 2 * M_PI * j / nphi);
        acc += gl.weights[k] * row * 2 * M_PI / nphi;
      }
      return acc / (4 * M_PI);
    }
    case geom::BackendKind::pillowcase: {
      const int n = 256;
      double acc = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += obs.f(2 * M_PI * i / n, 2 * M_PI * j / n);
      return acc / (static_cast<double>(n) * n);
    }
    case geom::BackendKind::hyperbolic_triangle: {
      const auto& s = backend.signature;
      const auto tri = geom::build_hyperbolic_triangle<double>(s.p, s.q, s.r);
      const auto sp = spectral::build_p2_space(spectral::triangle_mesh(tri, 4), spectral::MetricModel::hyperbolic_klein);
      const double integral = spectral::integrate(sp, [&](const Eigen::Vector2d& k) {
        const Eigen::Vector2d w = spectral::klein_to_disk(k);
        const auto z = geom::disk_to_half_plane<double>(w(0), w(1));
        return obs.f(z.x, z.y) + obs.f(-z.x, z.y);
      });
      return integral / backend.volume();
    }
  }
  throw UnsupportedBackend("liouville_average: unknown backend");
}

}  // namespace oqe::qe
