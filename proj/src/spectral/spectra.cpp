#include <algorithm>
#include <cmath>
#include <numeric>

#include "oqe/core/errors.hpp"
#include "oqe/spectral/eigen_system.hpp"
#include "oqe/spectral/legendre.hpp"

namespace oqe::spectral {

std::vector<std::pair<std::size_t, std::size_t>> group_multiplets(const std::vector<double>& values, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values[i] - values[i - 1] > tol * std::max(1.0, std::abs(values[i - 1]))) {
      out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

std::size_t EigenSystem::count_up_to(double lambda) const {
  return static_cast<std::size_t>(std::upper_bound(eigenvalues.begin(), eigenvalues.end(), lambda) -
                                  eigenvalues.begin());
}

double EigenSystem::evaluate(std::size_t j, double x1, double x2) const {
  if (j >= eigenvalues.size()) throw DomainError("EigenSystem::evaluate: index out of range");
  if (const auto* s = std::get_if<SphereData>(&data)) {
    const auto& md = s->modes[j];
    return std::sqrt(static_cast<double>(s->n)) * real_spherical_harmonic(md.l, md.m, x1, x2);
  }
  if (const auto* p = std::get_if<PillowcaseData>(&data)) {
    const auto& m = p->modes[j];
    if (m.isZero()) return 1.0 / (M_PI * std::sqrt(2.0));
    return std::cos(m(0) * x1 + m(1) * x2) / M_PI;
  }
  const auto& f = std::get<FemData>(data);
  if (!(x2 > 0)) throw DomainError("EigenSystem::evaluate: point must lie in the upper half-plane");
  auto [u, v] = geom::half_plane_to_disk(geom::HalfPlanePoint<double>{x1, x2});
  double sign = 1.0;
  if (v < 0) {
    v = -v;
    sign = f.parity[j];
  }
  const double val = evaluate_p2(*f.space, f.vectors.col(static_cast<Eigen::Index>(j)), disk_to_klein({u, v}));
  return sign * val;
}

EigenSystem sphere_quotient_spectrum(int n, int l_max) {
  if (n < 1) throw DomainError("sphere_quotient_spectrum: n must be >= 1");
  if (l_max < 0) throw DomainError("sphere_quotient_spectrum: l_max must be >= 0");
  EigenSystem es;
  es.backend = geom::GeometryBackend::sphere_quotient(n);
  SphereData d;
  d.n = n;
  for (int l = 0; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      if (m % n != 0) continue;
      d.modes.push_back({l, m});
      es.eigenvalues.push_back(std::sqrt(static_cast<double>(l) * (l + 1)));
    }
  }
  es.data = std::move(d);
  es.group_tolerance = 1e-6;
  es.multiplets = group_multiplets(es.eigenvalues, es.group_tolerance);
  return es;
}

EigenSystem pillowcase_spectrum(double lambda_max) {
  if (!(lambda_max > 0)) throw DomainError("pillowcase_spectrum: lambda_max must be > 0");
  const int M = static_cast<int>(std::floor(lambda_max));
  const double lim = lambda_max * lambda_max;
  std::vector<Eigen::Vector2i> modes;
  for (int m1 = 0; m1 <= M; ++m1)
    for (int m2 = -M; m2 <= M; ++m2) {
      if (m1 == 0 && m2 < 0) continue;
      if (static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 <= lim) modes.emplace_back(m1, m2);
    }
  std::sort(modes.begin(), modes.end(), [](const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
    const int na = a.squaredNorm(), nb = b.squaredNorm();
    if (na != nb) return na < nb;
    if (a(0) != b(0)) return a(0) < b(0);
    return a(1) < b(1);
  });
  EigenSystem es;
  es.backend = geom::GeometryBackend::pillowcase();
  for (const auto& m : modes) es.eigenvalues.push_back(std::sqrt(static_cast<double>(m.squaredNorm())));
  es.data = PillowcaseData{std::move(modes)};
  es.group_tolerance = 1e-6;
  es.multiplets = group_multiplets(es.eigenvalues, es.group_tolerance);
  return es;
}

EigenSystem triangle_orbifold_spectrum(int p, int q, int r, int k, int refinement) {
  (void)geom::GeometryBackend::hyperbolic_triangle(p, q, r);
  const auto tri = geom::build_hyperbolic_triangle<double>(p, q, r);
  return triangle_orbifold_spectrum(p, q, r, k, triangle_mesh(tri, refinement));
}

EigenSystem triangle_orbifold_spectrum(int p, int q, int r, int k, const Mesh& mesh) {
  if (k < 1) throw DomainError("triangle_orbifold_spectrum: k must be >= 1");
  EigenSystem es;
  es.backend = geom::GeometryBackend::hyperbolic_triangle(p, q, r);
  validate_mesh(mesh, 3);
  auto tri = std::make_shared<const geom::HyperbolicTriangle<double>>(geom::build_hyperbolic_triangle<double>(p, q, r));
  auto mesh_ptr = std::make_shared<const Mesh>(mesh);
  auto space = std::make_shared<const P2Space>(build_p2_space(mesh, MetricModel::hyperbolic_klein));
  const auto neu = laplace_eigenpairs(*space, k, false);
  const auto dir = laplace_eigenpairs(*space, k, true);

  struct Entry {
    double mu;
    int parity;
    Eigen::Index col;
  };
  std::vector<Entry> all;
  for (Eigen::Index i = 0; i < neu.values.size(); ++i) all.push_back({neu.values(i), 1, i});
  for (Eigen::Index i = 0; i < dir.values.size(); ++i) all.push_back({dir.values(i), -1, i});
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.mu < b.mu; });
  // beyond the smaller of the two top levels the merged list may miss eigenvalues
  const double complete = std::min(neu.values.maxCoeff(), dir.values.maxCoeff());
  while (!all.empty() && all.back().mu > complete) all.pop_back();

  FemData d;
  d.triangle = tri;
  d.mesh = mesh_ptr;
  d.space = space;
  d.vectors.resize(static_cast<Eigen::Index>(space->n_dofs()), static_cast<Eigen::Index>(all.size()));
  for (std::size_t j = 0; j < all.size(); ++j) {
    const auto& e = all[j];
    const auto& src = e.parity > 0 ? neu.vectors : dir.vectors;
    d.vectors.col(static_cast<Eigen::Index>(j)) = src.col(e.col) / std::sqrt(2.0);
    d.parity.push_back(e.parity);
    es.eigenvalues.push_back(std::sqrt(std::max(0.0, e.mu)));
  }
  es.data = std::move(d);
  es.group_tolerance = 1e-3;
  es.multiplets = group_multiplets(es.eigenvalues, es.group_tolerance);
  return es;
}

Eigen::VectorXd unit_disk_dirichlet(int k, int refinement) {
  const Mesh mesh = unit_disk_mesh(refinement);
  validate_mesh(mesh, 1);
  const auto space = build_p2_space(mesh, MetricModel::flat);
  return laplace_eigenpairs(space, k, true).values;
}

}  // namespace oqe::spectral
