#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "doctest.h"
#include "oqe/core/errors.hpp"
#include "oqe/spectral/eigen_system.hpp"
#include "oqe/spectral/legendre.hpp"

using namespace oqe;
using namespace oqe::spectral;

namespace {

// Gauss-Legendre in cos(theta) times trapezoid in phi over [0, 2pi/n).
double sphere_quotient_integral(int n, const std::function<double(double, double)>& f) {
  using GL = boost::math::quadrature::gauss<double, 100>;
  const int nphi = 256;
  const double wedge = 2 * M_PI / n;
  double acc = 0;
  for (int k = 0; k < nphi; ++k) {
    const double phi = wedge * (k + 0.5) / nphi;
    acc += GL::integrate([&](double x) { return f(std::acos(x), phi); }, -1.0, 1.0) * wedge / nphi;
  }
  return acc;
}

std::size_t lattice_count_half(double lambda) {
  // points m in Z^2 with |m| <= lambda, identified with -m
  const long long L = static_cast<long long>(lambda);
  long long full = 0;
  for (long long a = -L; a <= L; ++a)
    for (long long b = -L; b <= L; ++b)
      if (static_cast<double>(a * a + b * b) <= lambda * lambda) ++full;
  return static_cast<std::size_t>((full - 1) / 2 + 1);
}

}  // namespace

TEST_CASE("normalized Legendre matches boost spherical harmonics") {
  for (int l = 0; l <= 40; l += 3)
    for (int m = 0; m <= l; m += 2)
      for (double th : {0.2, 1.1, 2.9}) {
        const double phi = 0.37;
        const double ours = normalized_legendre(l, m, std::cos(th))[l - m] * std::cos(m * phi);
        const double ref = boost::math::spherical_harmonic_r(l, m, th, phi);
        CHECK(ours == doctest::Approx(ref).epsilon(1e-11).scale(1e-12));
      }
  CHECK_THROWS_AS(normalized_legendre(2, 3, 0.1), DomainError);
}

TEST_CASE("sphere_quotient_spectrum: counts, multiplicities, normalization") {
  for (int L : {0, 5, 30}) CHECK(sphere_quotient_spectrum(1, L).size() == static_cast<std::size_t>((L + 1) * (L + 1)));
  const auto e3 = sphere_quotient_spectrum(3, 30);
  CHECK(e3.size() == 321);
  const double lam4 = std::sqrt(20.0);
  std::size_t mult4 = 0;
  for (double v : e3.eigenvalues) mult4 += std::abs(v - lam4) < 1e-12;
  CHECK(mult4 == 3);
  for (std::size_t j = 1; j < e3.size(); ++j) CHECK(e3.eigenvalues[j] >= e3.eigenvalues[j - 1]);
  // multiplets = degrees
  CHECK(e3.multiplets.size() == 31);

  const auto e = sphere_quotient_spectrum(3, 12);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
  for (int t = 0; t < 12; ++t) {
    const std::size_t i = pick(rng), j = pick(rng);
    const double ip = sphere_quotient_integral(3, [&](double th, double ph) { return e.evaluate(i, th, ph) * e.evaluate(j, th, ph); });
    CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1));
    CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-10);
  }
  // invariance under the rotation by 2pi/3
  CHECK(e.evaluate(20, 0.7, 0.2) == doctest::Approx(e.evaluate(20, 0.7, 0.2 + 2 * M_PI / 3)));
}

TEST_CASE("pillowcase_spectrum: constant mode, lattice count, orthogonality") {
  const auto e = pillowcase_spectrum(200.0);
  CHECK(e.eigenvalues[0] == 0.0);
  CHECK(e.evaluate(0, 0.3, 0.4) == doctest::Approx(1.0 / std::sqrt(2 * M_PI * M_PI)).epsilon(1e-15));
  CHECK(e.size() == lattice_count_half(200.0));
  CHECK(std::abs(e.size() / (M_PI / 2 * 200.0 * 200.0) - 1) < 0.03);
  CHECK(pillowcase_spectrum(10.0).size() == lattice_count_half(10.0));
  CHECK(pillowcase_spectrum(7.5).count_up_to(5.0) == lattice_count_half(5.0));

  // exact orthonormality: trapezoid on a 64x64 grid over the torus is exact for these trig polynomials;
  // the pillowcase is half the torus
  const auto s = pillowcase_spectrum(6.0);
  const int G = 64;
  for (std::size_t i = 0; i < s.size(); i += 3)
    for (std::size_t j = 0; j < s.size(); j += 2) {
      double acc = 0;
      for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) {
          const double x1 = 2 * M_PI * a / G, x2 = 2 * M_PI * b / G;
          acc += s.evaluate(i, x1, x2) * s.evaluate(j, x1, x2);
        }
      acc *= (2 * M_PI / G) * (2 * M_PI / G) / 2;
      CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("multiplet grouping") {
  const auto g = group_multiplets({0.0, 1.0, 1.0 + 1e-9, 2.0, 2.0, 2.0, 3.0}, 1e-6);
  REQUIRE(g.size() == 4);
  CHECK(g[1] == std::make_pair<std::size_t, std::size_t>(1, 2));
  CHECK(g[2] == std::make_pair<std::size_t, std::size_t>(3, 3));
}

TEST_CASE("meshes: validity, tags, file round trip, error cases") {
  const auto tri = geom::build_hyperbolic_triangle<double>(2, 3, 7);
  const Mesh m = triangle_mesh(tri, 1);
  CHECK_NOTHROW(validate_mesh(m, 3));
  CHECK(m.n_triangles() == 64);
  CHECK(m.n_vertices() == 45);
  CHECK_NOTHROW(validate_mesh(unit_disk_mesh(1), 1));
  CHECK(unit_disk_mesh(1).n_triangles() == 6 * 64);

  // boundary vertices lie on the geodesic sides
  for (std::size_t t = 0; t < m.n_triangles(); ++t)
    for (int e = 0; e < 3; ++e) {
      const int side = m.edge_side(t, e);
      if (side < 0) continue;
      const auto w = m.vertices[m.triangles[t][e]];
      const auto z = geom::disk_to_half_plane(w(0), w(1));
      CHECK(tri.sides[side].distance(z) <= 1e-12);
    }

  std::stringstream ss;
  write_mesh(m, ss);
  const std::string text = ss.str();
  CHECK(text.rfind("mesh v=45 t=64\n", 0) == 0);
  const Mesh back = read_mesh(ss);
  CHECK(back.vertices == m.vertices);
  CHECK(back.triangles == m.triangles);
  CHECK(back.tags == m.tags);
  CHECK(back.refinement == 1);
  std::stringstream again;
  write_mesh(back, again);
  CHECK(again.str() == text);

  Mesh flipped = m;
  std::swap(flipped.triangles[3][0], flipped.triangles[3][1]);
  CHECK_THROWS_AS(validate_mesh(flipped, 3), MeshError);
  Mesh untagged = m;
  untagged.tags[0] = 0;
  CHECK_THROWS_AS(validate_mesh(untagged, 3), MeshError);
  Mesh holey = m;
  holey.triangles.pop_back();
  holey.tags.pop_back();
  CHECK_THROWS_AS(validate_mesh(holey, 3), MeshError);
  std::stringstream bad("mush v=3 t=1\n");
  CHECK_THROWS_AS(read_mesh(bad), MeshError);
  std::stringstream trunc("mesh v=3 t=1\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(trunc), MeshError);
}

TEST_CASE("P2 space: hyperbolic area of the triangle and disk area") {
  const auto tri = geom::build_hyperbolic_triangle<double>(2, 3, 7);
  const auto sp = build_p2_space(triangle_mesh(tri, 2), MetricModel::hyperbolic_klein);
  CHECK(integrate(sp, [](const Eigen::Vector2d&) { return 1.0; }) == doctest::Approx(M_PI / 42).epsilon(1e-9));
  const auto disk = build_p2_space(unit_disk_mesh(3), MetricModel::flat);
  CHECK(integrate(disk, [](const Eigen::Vector2d&) { return 1.0; }) == doctest::Approx(M_PI).epsilon(1e-3));
  // P2 interpolation reproduces quadratics exactly
  Eigen::VectorXd u(sp.n_dofs());
  for (std::size_t i = 0; i < sp.n_dofs(); ++i) u(i) = sp.nodes[i].squaredNorm() + 3 * sp.nodes[i](1);
  const Eigen::Vector2d x(0.1, 0.05);
  CHECK(evaluate_p2(sp, u, x) == doctest::Approx(x.squaredNorm() + 3 * x(1)).epsilon(1e-13));
  CHECK(std::isnan(evaluate_p2(sp, u, Eigen::Vector2d(-0.5, -0.5))));
}

TEST_CASE("unit disk Dirichlet sanity: first Bessel zero squared") {
  const double j01 = 2.404825557695773;
  const auto mu = unit_disk_dirichlet(3, 3);
  CHECK(std::abs(mu(0) / (j01 * j01) - 1) < 0.005);
  // second eigenvalue is the double j_{1,1}^2
  const double j11 = 3.831705970207512;
  CHECK(std::abs(mu(1) / (j11 * j11) - 1) < 0.005);
  CHECK(std::abs(mu(2) / (j11 * j11) - 1) < 0.005);
}

TEST_CASE("triangle_orbifold_spectrum (2,3,7): Neumann zero mode, normalization, parity") {
  const auto es = triangle_orbifold_spectrum(2, 3, 7, 12, 2);
  REQUIRE(es.size() > 12);
  REQUIRE(es.size() <= 24);
  // the cut list has no gaps: it is the head of a longer solve
  const auto longer = triangle_orbifold_spectrum(2, 3, 7, 24, 2);
  REQUIRE(longer.size() > es.size());
  for (std::size_t j = 1; j < es.size(); ++j)
    CHECK(es.eigenvalues[j] == doctest::Approx(longer.eigenvalues[j]).epsilon(1e-8));
  CHECK(longer.eigenvalues[es.size()] > es.eigenvalues.back() * (1 + 1e-10));
  const auto& d = std::get<FemData>(es.data);
  CHECK(es.eigenvalues[0] <= 1e-4 * es.eigenvalues[1]);
  CHECK(es.eigenvalues[0] * es.eigenvalues[0] <= 1e-8 * es.eigenvalues[1] * es.eigenvalues[1]);
  CHECK(d.parity[0] == 1);
  // first Dirichlet eigenvalue positive
  for (std::size_t j = 0; j < es.size(); ++j)
    if (d.parity[j] < 0) {
      CHECK(es.eigenvalues[j] > 1.0);
      break;
    }
  for (std::size_t j = 1; j < es.size(); ++j) CHECK(es.eigenvalues[j] >= es.eigenvalues[j - 1]);
  // constant mode equals 1/sqrt(vol X)
  const auto& tri = *d.triangle;
  CHECK(std::abs(es.evaluate(0, tri.incenter.x, tri.incenter.y)) == doctest::Approx(1 / std::sqrt(M_PI / 21)).epsilon(1e-8));
  // unit norm on X and orthogonality, through quadrature and the mass matrix
  const Eigen::VectorXd norms = weighted_squares(*d.space, d.vectors, [](const Eigen::Vector2d&) { return 1.0; });
  for (Eigen::Index j = 0; j < norms.size(); ++j) CHECK(std::abs(2 * norms(j) - 1) <= 1e-6);
  const SparseMatrix M = assemble_mass(*d.space);
  const Eigen::MatrixXd G = 2 * d.vectors.transpose() * (M * d.vectors);
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (i != j && d.parity[i] == d.parity[j]) CHECK(std::abs(G(i, j)) <= 1e-6);
  // even/odd extension across AB
  const auto [iu, iv] = geom::half_plane_to_disk(tri.incenter);
  const geom::HalfPlanePoint<double> z = geom::disk_to_half_plane(iu * 1.3, iv * 0.7);
  for (std::size_t j = 0; j < es.size(); ++j)
    CHECK(es.evaluate(j, -z.x, z.y) == doctest::Approx(d.parity[j] * es.evaluate(j, z.x, z.y)).epsilon(1e-12).scale(1e-12));
}

TEST_CASE("FEM eigenvalues are non-increasing under refinement") {
  std::vector<std::vector<double>> levels;
  for (int r = 1; r <= 3; ++r) levels.push_back(triangle_orbifold_spectrum(2, 3, 7, 10, r).eigenvalues);
  for (std::size_t r = 1; r < levels.size(); ++r)
    for (std::size_t j = 0; j < 10; ++j) {
      const double mu = levels[r][j] * levels[r][j], mu_coarse = levels[r - 1][j] * levels[r - 1][j];
      CHECK(mu <= mu_coarse + 1e-9);
    }
}

TEST_CASE("FEM self-convergence and eigensolver error cases") {
  const auto a = triangle_orbifold_spectrum(2, 3, 7, 20, 3);
  const auto b = triangle_orbifold_spectrum(2, 3, 7, 20, 4);
  for (std::size_t j = 1; j < 20; ++j) CHECK(std::abs(a.eigenvalues[j] / b.eigenvalues[j] - 1) < 0.01);

  const auto tri = geom::build_hyperbolic_triangle<double>(2, 3, 7);
  const auto sp = build_p2_space(triangle_mesh(tri, 0), MetricModel::hyperbolic_klein);
  const SparseMatrix K = assemble_stiffness(sp), M = assemble_mass(sp);
  try {
    solve_generalized(K, -M, 3, 0.0);
    FAIL("expected EigenSolverError");
  } catch (const EigenSolverError& e) {
    CHECK(e.kind() == EigenSolverError::Kind::indefinite_mass);
  }
  try {
    // K is singular (constants), so the unshifted factorization breaks down
    solve_generalized(K, M, 3, 0.0);
    FAIL("expected EigenSolverError");
  } catch (const EigenSolverError& e) {
    CHECK(e.kind() == EigenSolverError::Kind::factorization_failed);
  }
  CHECK_THROWS_AS(solve_generalized(K, M, static_cast<int>(K.rows()), -1.0), DomainError);
  CHECK_THROWS_AS(triangle_orbifold_spectrum(2, 3, 6, 5, 1), UnsupportedBackend);
}
