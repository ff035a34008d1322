#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "oqe/spectral/mesh.hpp"

namespace oqe::spectral {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Metric in which the Laplacian is discretized, in the mesh's working chart.
///   flat: Euclidean metric on the disk coordinates.
///   hyperbolic_klein: the hyperbolic metric written in Klein coordinates,
///     stiffness coefficient (I - x x^T)/sqrt(1 - |x|^2), area density (1 - |x|^2)^(-3/2).
enum class MetricModel { flat, hyperbolic_klein };

/// Continuous piecewise-quadratic space: vertex nodes then edge midpoints.
struct P2Space {
  MetricModel metric{MetricModel::flat};
  std::vector<Eigen::Vector2d> nodes;             // working-chart coordinates
  std::vector<std::array<int, 6>> element_dofs;   // v0 v1 v2 m01 m12 m20
  std::vector<char> on_boundary;
  std::size_t n_dofs() const { return nodes.size(); }
};

P2Space build_p2_space(const Mesh& mesh, MetricModel metric);

/// Seven-point degree-5 rule on the reference triangle (xi, eta, weight summing to 1/2).
struct QuadraturePoint {
  double xi, eta, w;
};
const std::array<QuadraturePoint, 7>& dunavant7();

/// P2 shape functions at reference point (xi, eta).
std::array<double, 6> p2_shape(double xi, double eta);

SparseMatrix assemble_stiffness(const P2Space& space);

/// Mass matrix with density rho * f, f evaluated at working-chart points.
SparseMatrix assemble_mass(const P2Space& space,
                           const std::function<double(const Eigen::Vector2d&)>& f = {});

/// Integral of density * f over the meshed region.
double integrate(const P2Space& space, const std::function<double(const Eigen::Vector2d&)>& f);

/// For each column u of U, sum over quadrature points of rho * f * u^2 (= u^T M_f u).
Eigen::VectorXd weighted_squares(const P2Space& space, const Eigen::MatrixXd& U,
                                 const std::function<double(const Eigen::Vector2d&)>& f);

/// Value of the P2 function with coefficients u at x; NaN outside the mesh.
double evaluate_p2(const P2Space& space, const Eigen::Ref<const Eigen::VectorXd>& u,
                   const Eigen::Vector2d& x);

struct GeneralizedEigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
};

/// nev eigenpairs K u = mu M u closest to sigma from above, by ARPACK
/// shift-invert Lanczos with a sparse LDL^T factorization of K - sigma M.
GeneralizedEigenpairs solve_generalized(const SparseMatrix& K, const SparseMatrix& M, int nev,
                                        double sigma, double tol = 1e-10);

/// Laplace eigenpairs with Neumann (free) or Dirichlet boundary conditions.
GeneralizedEigenpairs laplace_eigenpairs(const P2Space& space, int nev, bool dirichlet);

}  // namespace oqe::spectral
