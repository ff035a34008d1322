#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "oqe/core/errors.hpp"
#include "oqe/qe/qe.hpp"
#include "oqe/symbols/symbols.hpp"

namespace oqe::symbols {

namespace {

/// least-squares polynomial in x of the given degree; returns the value at x = 0
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(x.size()), degree + 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int p = 0; p <= degree; ++p) A(static_cast<Eigen::Index>(i), p) = std::pow(x[i], p);
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

}  // namespace

ZetaProbe zeta_residue(const spectral::EigenSystem& eig, const qe::Observable& obs, const std::vector<double>& eps) {
  if (eig.backend.kind == geom::BackendKind::hyperbolic_triangle)
    throw UnsupportedBackend("zeta_residue: needs the pillowcase or a sphere quotient");
  if (eps.size() < 3) throw DomainError("zeta_residue: need at least three offsets");
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (!(eps[i] > 0) || (i > 0 && !(eps[i] < eps[i - 1])))
      throw DomainError("zeta_residue: offsets must be positive and decreasing");

  const auto series = qe::matrix_elements(eig, obs);
  const auto samples = qe::top_decade_samples(series);
  if (samples.lambda.size() < 50) throw ZetaTailError("zeta_residue: spectrum too short for the tail model");

  // N_A(lambda) ~ C lambda^2 + D lambda on the top decade
  Eigen::MatrixXd A(static_cast<Eigen::Index>(samples.lambda.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(samples.lambda.size()));
  for (std::size_t i = 0; i < samples.lambda.size(); ++i) {
    const double l = samples.lambda[i];
    A(static_cast<Eigen::Index>(i), 0) = l * l;
    A(static_cast<Eigen::Index>(i), 1) = l;
    b(static_cast<Eigen::Index>(i)) = samples.N[i];
  }
  const Eigen::Vector2d cd = A.colPivHouseholderQr().solve(b);

  ZetaProbe probe;
  probe.tail_C = cd(0);
  probe.tail_D = cd(1);
  probe.eps = eps;
  const double L = series.lambdas.back();
  for (const double e : eps) {
    const double z = probe.z0 - e;
    double partial = 0;
    for (std::size_t j = 0; j < series.lambdas.size(); ++j)
      if (series.lambdas[j] > 0) partial += series.values[j] * std::pow(series.lambdas[j], z);
    // int_L^inf lambda^z d(C lambda^2 + D lambda)
    const double tail = -2 * probe.tail_C * std::pow(L, z + 2) / (z + 2) - probe.tail_D * std::pow(L, z + 1) / (z + 1);
    probe.zeta_values.push_back(partial + tail);
    probe.scaled.push_back(-e * (partial + tail));
  }
  const double quad = extrapolate_to_zero(eps, probe.scaled, 2);
  const std::vector<double> e_small(eps.end() - 3, eps.end()), s_small(probe.scaled.end() - 3, probe.scaled.end());
  const double lin = extrapolate_to_zero(e_small, s_small, 1);
  probe.residue = quad;
  probe.uncertainty = std::abs(quad - lin);
  probe.sign = quad < 0 ? -1 : 1;
  if (!std::isfinite(quad) || probe.uncertainty > 0.05 * std::abs(quad)) {
    std::ostringstream msg;
    msg << "zeta_residue: unstable extrapolation (quadratic " << quad << ", linear " << lin << ", tail C "
        << probe.tail_C << ")";
    throw ZetaTailError(msg.str());
  }
  return probe;
}

}  // namespace oqe::symbols
