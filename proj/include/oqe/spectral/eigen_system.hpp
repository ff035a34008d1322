#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "oqe/geom/backend.hpp"
#include "oqe/spectral/fem.hpp"

namespace oqe::spectral {

/// Real spherical-harmonic mode (l, m): m > 0 cosine, m < 0 sine, m = 0 zonal.
struct SphereMode {
  int l{0};
  int m{0};
};

struct SphereData {
  int n{1};
  std::vector<SphereMode> modes;
};

/// Mode m (canonical representative of {m, -m}) with eigenfunction cos(m.x)/pi, or 1/(pi sqrt2) for m = 0.
struct PillowcaseData {
  std::vector<Eigen::Vector2i> modes;
};

/// Neumann (parity +1) and Dirichlet (parity -1) eigenvectors on the triangle T,
/// normalized so that u^T M u = 1/2: the even/odd extension to the doubled
/// triangle then has unit L2 norm on X.
struct FemData {
  std::shared_ptr<const geom::HyperbolicTriangle<double>> triangle;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const P2Space> space;
  Eigen::MatrixXd vectors;
  std::vector<int> parity;
};

/// Eigenpairs of P = sqrt(Laplacian) on X, lambda ascending.
/// Points are given in the flow chart of the backend: sphere (theta, phi),
/// pillowcase (x1, x2), hyperbolic half-plane (x, y).
struct EigenSystem {
  geom::GeometryBackend backend;
  std::vector<double> eigenvalues;
  /// (first index, size) of groups of equal eigenvalues within `group_tolerance`.
  std::vector<std::pair<std::size_t, std::size_t>> multiplets;
  double group_tolerance{1e-6};
  std::variant<SphereData, PillowcaseData, FemData> data;

  std::size_t size() const { return eigenvalues.size(); }
  double volume() const { return backend.volume(); }
  /// N(lambda) = #{j : lambda_j <= lambda}
  std::size_t count_up_to(double lambda) const;
  double evaluate(std::size_t j, double x1, double x2) const;
};

/// Groups consecutive eigenvalues whose relative gap is at most tol.
std::vector<std::pair<std::size_t, std::size_t>> group_multiplets(const std::vector<double>& values, double tol);

EigenSystem sphere_quotient_spectrum(int n, int l_max);

EigenSystem pillowcase_spectrum(double lambda_max);

/// Union of the k lowest Neumann and k lowest Dirichlet eigenvalues of the
/// geodesic triangle with angles pi/p, pi/q, pi/r, cut at the smaller of the
/// two top levels so the merged list has no gaps.
EigenSystem triangle_orbifold_spectrum(int p, int q, int r, int k, int refinement);

/// Same, on a caller-supplied mesh of the triangle.
EigenSystem triangle_orbifold_spectrum(int p, int q, int r, int k, const Mesh& mesh);

/// Lowest k Dirichlet eigenvalues mu of the flat unit disk (sanity case).
Eigen::VectorXd unit_disk_dirichlet(int k, int refinement);

}  // namespace oqe::spectral
