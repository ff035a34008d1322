#include "oqe/qe/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include "oqe/core/errors.hpp"

namespace oqe::qe {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), sub(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussRule g;
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    g.weights.push_back(2 * v * v);
  }
  return g;
}

}  // namespace oqe::qe
