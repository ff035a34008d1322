#include <algorithm>
#include <cmath>
#include <limits>

#include "oqe/core/errors.hpp"
#include "oqe/qe/qe.hpp"

namespace oqe::qe {

namespace {

struct Groups {
  std::vector<std::size_t> end;  // one past the last index of each group
};

Groups group_ends(const std::vector<double>& lambdas, double tol) {
  Groups g;
  for (const auto& [first, size] : spectral::group_multiplets(lambdas, tol)) g.end.push_back(first + size);
  return g;
}

}  // namespace

double weyl_constant(const geom::GeometryBackend& backend) { return backend.volume() / (4 * M_PI); }

CountingSamples top_decade_samples(const MatrixElementSeries& series) {
  const auto& lam = series.lambdas;
  if (lam.empty()) throw DomainError("empty matrix-element series");
  const auto g = group_ends(lam, series.group_tolerance);
  const double top = lam.back();
  CountingSamples out;
  double acc = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < g.end.size(); ++k) {
    for (; j < g.end[k]; ++j) acc += series.values[j];
    const double mid = 0.5 * (lam[g.end[k] - 1] + lam[g.end[k]]);
    if (mid >= top / 10 && mid <= top) {
      out.lambda.push_back(mid);
      out.N.push_back(acc);
    }
  }
  return out;
}

WeylFit local_weyl_fit(const MatrixElementSeries& series) {
  const auto samples = top_decade_samples(series);
  const auto& s = samples.lambda;
  const auto& N = samples.N;
  if (s.size() < 50)
    throw DomainError("local_weyl_fit: top decade holds " + std::to_string(s.size()) + " points, need >= 50");

  WeylFit fit;
  fit.points = s.size();
  fit.lambda_low = s.front();
  fit.lambda_high = s.back();
  const bool positive = std::all_of(N.begin(), N.end(), [](double v) { return v > 0; });
  if (positive) {
    double mx = 0, my = 0, mr = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      mx += std::log(s[i]);
      my += std::log(N[i]);
      mr += std::log(N[i]) - 2 * std::log(s[i]);
    }
    const double n = static_cast<double>(s.size());
    mx /= n;
    my /= n;
    mr /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double dx = std::log(s[i]) - mx;
      sxy += dx * (std::log(N[i]) - my);
      sxx += dx * dx;
    }
    fit.exponent = sxy / sxx;
    fit.C = std::exp(mr);
  } else {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      num += N[i] * s[i] * s[i];
      den += std::pow(s[i], 4);
    }
    fit.C = num / den;
    fit.exponent = std::numeric_limits<double>::quiet_NaN();
  }
  fit.predicted = series.omega * weyl_constant(series.backend);
  const double scale = std::abs(fit.predicted) > 0 ? std::abs(fit.predicted) : 1.0;
  fit.relative_error = std::abs(fit.C - fit.predicted) / scale;
  return fit;
}

WeylFit weyl_fit(const spectral::EigenSystem& eig) {
  MatrixElementSeries s;
  s.backend = eig.backend;
  s.observable = "one";
  s.omega = 1.0;
  s.group_tolerance = eig.group_tolerance;
  s.lambdas = eig.eigenvalues;
  s.values.assign(eig.size(), 1.0);
  return local_weyl_fit(s);
}

PointwiseWeyl pointwise_weyl(const spectral::EigenSystem& eig, double theta, double phi, int group_order,
                             double lambda) {
  if (eig.backend.kind != geom::BackendKind::sphere_quotient)
    throw UnsupportedBackend("pointwise_weyl: needs the sphere-quotient backend");
  if (group_order < 1) throw DomainError("pointwise_weyl: group order must be >= 1");
  PointwiseWeyl r;
  for (std::size_t j = 0; j < eig.size() && eig.eigenvalues[j] <= lambda; ++j) {
    const double v = eig.evaluate(j, theta, phi);
    r.measured += v * v;
    ++r.count;
  }
  r.predicted = group_order * lambda * lambda / (4 * M_PI);
  r.ratio = r.measured / r.predicted;
  return r;
}

PointwiseWeyl pointwise_weyl_at_cone(const spectral::EigenSystem& eig, int cone_order, double lambda) {
  if (eig.backend.kind != geom::BackendKind::sphere_quotient)
    throw UnsupportedBackend("pointwise_weyl_at_cone: needs the sphere-quotient backend");
  if (cone_order != eig.backend.sphere_n)
    throw DomainError("pointwise_weyl_at_cone: cone order must equal the quotient order n");
  return pointwise_weyl(eig, 0.0, 0.0, cone_order, lambda);
}

std::size_t QeProfile::index_at(double l) const {
  const auto it = std::upper_bound(lambda.begin(), lambda.end(), l);
  if (it == lambda.begin()) throw DomainError("QeProfile: lambda below the first profile point");
  return static_cast<std::size_t>(it - lambda.begin()) - 1;
}

QeProfile qe_variance_and_density(const MatrixElementSeries& series, double omega, double eps) {
  if (!(eps > 0)) throw DomainError("qe_variance_and_density: eps must be > 0");
  QeProfile p;
  const auto g = group_ends(series.lambdas, series.group_tolerance);
  double sq = 0;
  std::size_t out = 0, j = 0;
  for (const std::size_t end : g.end) {
    for (; j < end; ++j) {
      const double d = series.values[j] - omega;
      sq += d * d;
      if (std::abs(d) > eps) ++out;
    }
    p.lambda.push_back(series.lambdas[end - 1]);
    p.count.push_back(end);
    p.variance.push_back(sq / static_cast<double>(end));
    p.excluded_fraction.push_back(static_cast<double>(out) / static_cast<double>(end));
  }
  return p;
}

double egorov_phase_check(const Eigen::Vector2i& m, double k_min, double k_max) {
  if (!(k_min > 0) || !(k_max >= k_min)) throw DomainError("egorov_phase_check: need 0 < k_min <= k_max");
  if (m.squaredNorm() > 9) throw DomainError("egorov_phase_check: |m| must be <= 3");
  const int K = static_cast<int>(std::ceil(k_max));
  const double lo = k_min * k_min, hi = k_max * k_max;
  double worst = 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const double r2 = static_cast<double>(a) * a + static_cast<double>(b) * b;
      if (r2 < lo || r2 > hi) continue;
      const double k = std::sqrt(r2);
      const double ka = std::sqrt(static_cast<double>(a + m(0)) * (a + m(0)) + static_cast<double>(b + m(1)) * (b + m(1)));
      const double exact = k - ka;
      const double symbol = -(m(0) * a + m(1) * b) / k;
      worst = std::max(worst, std::abs(exact - symbol));
    }
  return worst;
}

}  // namespace oqe::qe
