#include "oqe/spectral/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <Eigen/SparseCholesky>
#include <arpack/arpack.hpp>

#include "oqe/core/errors.hpp"

namespace oqe::spectral {

namespace {

struct Coefficients {
  Eigen::Matrix2d A;  // stiffness tensor (includes the area density)
  double rho;         // area density
};

Coefficients coefficients(MetricModel metric, const Eigen::Vector2d& x) {
  if (metric == MetricModel::flat) return {Eigen::Matrix2d::Identity(), 1.0};
  const double s = 1.0 - x.squaredNorm();
  if (!(s > 0)) throw MeshError("klein chart: point outside the unit disk");
  const double root = std::sqrt(s);
  return {(Eigen::Matrix2d::Identity() - x * x.transpose()) / root, 1.0 / (s * root)};
}

struct ElementGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d J;
  Eigen::Matrix2d JinvT;
  double area2;  // |det J|
};

ElementGeometry element_geometry(const P2Space& sp, std::size_t e) {
  const auto& d = sp.element_dofs[e];
  ElementGeometry g;
  g.origin = sp.nodes[d[0]];
  g.J.col(0) = sp.nodes[d[1]] - sp.nodes[d[0]];
  g.J.col(1) = sp.nodes[d[2]] - sp.nodes[d[0]];
  const double det = g.J.determinant();
  g.area2 = std::abs(det);
  g.JinvT = g.J.inverse().transpose();
  return g;
}

std::array<Eigen::Vector2d, 6> p2_ref_gradients(double xi, double eta) {
  const double l1 = 1 - xi - eta, l2 = xi, l3 = eta;
  const Eigen::Vector2d d1(-1, -1), d2(1, 0), d3(0, 1);
  return {(4 * l1 - 1) * d1,
          (4 * l2 - 1) * d2,
          (4 * l3 - 1) * d3,
          4 * (l2 * d1 + l1 * d2),
          4 * (l3 * d2 + l2 * d3),
          4 * (l1 * d3 + l3 * d1)};
}

}  // namespace

const std::array<QuadraturePoint, 7>& dunavant7() {
  static const std::array<QuadraturePoint, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<QuadraturePoint, 7>{{{1.0 / 3, 1.0 / 3, 0.225 / 2},
                                           {b1, b1, w1 / 2},
                                           {a1, b1, w1 / 2},
                                           {b1, a1, w1 / 2},
                                           {b2, b2, w2 / 2},
                                           {a2, b2, w2 / 2},
                                           {b2, a2, w2 / 2}}};
  }();
  return rule;
}

std::array<double, 6> p2_shape(double xi, double eta) {
  const double l1 = 1 - xi - eta, l2 = xi, l3 = eta;
  return {l1 * (2 * l1 - 1), l2 * (2 * l2 - 1), l3 * (2 * l3 - 1), 4 * l1 * l2, 4 * l2 * l3, 4 * l3 * l1};
}

P2Space build_p2_space(const Mesh& mesh, MetricModel metric) {
  P2Space sp;
  sp.metric = metric;
  const std::size_t nv = mesh.vertices.size();
  for (const auto& v : mesh.vertices) sp.nodes.push_back(metric == MetricModel::hyperbolic_klein ? disk_to_klein(v) : v);
  sp.on_boundary.assign(nv, 0);
  std::unordered_map<long long, int> mid;
  mid.reserve(3 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    std::array<int, 6> d{tr[0], tr[1], tr[2], 0, 0, 0};
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      const long long key = static_cast<long long>(std::min(a, b)) * static_cast<long long>(nv) + std::max(a, b);
      auto it = mid.find(key);
      if (it == mid.end()) {
        it = mid.emplace(key, static_cast<int>(sp.nodes.size())).first;
        sp.nodes.push_back(0.5 * (sp.nodes[a] + sp.nodes[b]));
        sp.on_boundary.push_back(0);
      }
      d[3 + e] = it->second;
      if (mesh.edge_side(t, e) >= 0) {
        sp.on_boundary[a] = sp.on_boundary[b] = 1;
        sp.on_boundary[it->second] = 1;
      }
    }
    sp.element_dofs.push_back(d);
  }
  return sp;
}

SparseMatrix assemble_stiffness(const P2Space& sp) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sp.element_dofs.size() * 36);
  for (std::size_t e = 0; e < sp.element_dofs.size(); ++e) {
    const auto g = element_geometry(sp, e);
    Eigen::Matrix<double, 6, 6> loc = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& q : dunavant7()) {
      const Eigen::Vector2d x = g.origin + g.J * Eigen::Vector2d(q.xi, q.eta);
      const auto c = coefficients(sp.metric, x);
      const auto rg = p2_ref_gradients(q.xi, q.eta);
      std::array<Eigen::Vector2d, 6> grad;
      for (int a = 0; a < 6; ++a) grad[a] = g.JinvT * rg[a];
      const double w = q.w * g.area2;
      for (int a = 0; a < 6; ++a) {
        const Eigen::Vector2d Ag = c.A * grad[a];
        for (int b = 0; b < 6; ++b) loc(a, b) += w * Ag.dot(grad[b]);
      }
    }
    const auto& d = sp.element_dofs[e];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) trip.emplace_back(d[a], d[b], loc(a, b));
  }
  SparseMatrix K(sp.n_dofs(), sp.n_dofs());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrix assemble_mass(const P2Space& sp, const std::function<double(const Eigen::Vector2d&)>& f) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sp.element_dofs.size() * 36);
  for (std::size_t e = 0; e < sp.element_dofs.size(); ++e) {
    const auto g = element_geometry(sp, e);
    Eigen::Matrix<double, 6, 6> loc = Eigen::Matrix<double, 6, 6>::Zero();
    for (const auto& q : dunavant7()) {
      const Eigen::Vector2d x = g.origin + g.J * Eigen::Vector2d(q.xi, q.eta);
      const double rho = coefficients(sp.metric, x).rho * (f ? f(x) : 1.0);
      const auto N = p2_shape(q.xi, q.eta);
      const double w = q.w * g.area2 * rho;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) loc(a, b) += w * N[a] * N[b];
    }
    const auto& d = sp.element_dofs[e];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) trip.emplace_back(d[a], d[b], loc(a, b));
  }
  SparseMatrix M(sp.n_dofs(), sp.n_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

double integrate(const P2Space& sp, const std::function<double(const Eigen::Vector2d&)>& f) {
  double acc = 0;
  for (std::size_t e = 0; e < sp.element_dofs.size(); ++e) {
    const auto g = element_geometry(sp, e);
    for (const auto& q : dunavant7()) {
      const Eigen::Vector2d x = g.origin + g.J * Eigen::Vector2d(q.xi, q.eta);
      acc += q.w * g.area2 * coefficients(sp.metric, x).rho * f(x);
    }
  }
  return acc;
}

Eigen::VectorXd weighted_squares(const P2Space& sp, const Eigen::MatrixXd& U,
                                 const std::function<double(const Eigen::Vector2d&)>& f) {
  const Eigen::Index k = U.cols();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
  Eigen::Matrix<double, 6, Eigen::Dynamic> local(6, k);
  for (std::size_t e = 0; e < sp.element_dofs.size(); ++e) {
    const auto g = element_geometry(sp, e);
    const auto& d = sp.element_dofs[e];
    for (int a = 0; a < 6; ++a) local.row(a) = U.row(d[a]);
    for (const auto& q : dunavant7()) {
      const Eigen::Vector2d x = g.origin + g.J * Eigen::Vector2d(q.xi, q.eta);
      const double w = q.w * g.area2 * coefficients(sp.metric, x).rho * f(x);
      if (w == 0) continue;
      const auto N = p2_shape(q.xi, q.eta);
      const Eigen::Map<const Eigen::Matrix<double, 6, 1>> n(N.data());
      const Eigen::RowVectorXd vals = n.transpose() * local;
      out += w * vals.cwiseAbs2().transpose();
    }
  }
  return out;
}

double evaluate_p2(const P2Space& sp, const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Vector2d& x) {
  const double tol = 1e-12;
  for (std::size_t e = 0; e < sp.element_dofs.size(); ++e) {
    const auto g = element_geometry(sp, e);
    const Eigen::Vector2d r = g.J.inverse() * (x - g.origin);
    if (r(0) < -tol || r(1) < -tol || r(0) + r(1) > 1 + tol) continue;
    const auto N = p2_shape(r(0), r(1));
    double v = 0;
    for (int a = 0; a < 6; ++a) v += N[a] * u(sp.element_dofs[e][a]);
    return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

GeneralizedEigenpairs solve_generalized(const SparseMatrix& K, const SparseMatrix& M, int nev, double sigma,
                                        double tol) {
  using Kind = EigenSolverError::Kind;
  const a_int n = static_cast<a_int>(K.rows());
  if (nev < 1 || nev >= n) throw DomainError("solve_generalized: need 1 <= nev < dimension");
  {
    Eigen::SimplicialLDLT<SparseMatrix> mf(M);
    if (mf.info() != Eigen::Success || (mf.vectorD().array() <= 0).any())
      throw EigenSolverError(Kind::indefinite_mass, "mass matrix is not positive definite");
  }
  const SparseMatrix shifted = K - sigma * M;
  Eigen::SimplicialLDLT<SparseMatrix> fac(shifted);
  if (fac.info() != Eigen::Success)
    throw EigenSolverError(Kind::factorization_failed, "factorization of K - sigma M failed");
  {
    const Eigen::VectorXd D = fac.vectorD().cwiseAbs();
    if (!(D.minCoeff() > 1e-12 * D.maxCoeff()))
      throw EigenSolverError(Kind::factorization_failed, "K - sigma M is numerically singular (sigma is an eigenvalue)");
  }

  const a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, nev + 20));
  const a_int lworkl = ncv * (ncv + 8);
  std::vector<double> resid(n), V(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n)),
      workl(lworkl);
  // deterministic starting vector
  for (a_int i = 0; i < n; ++i) resid[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  std::array<a_int, 11> iparam{};
  std::array<a_int, 14> ipntr{};
  iparam[0] = 1;
  iparam[2] = 3000;
  iparam[6] = 3;
  a_int ido = 0, info = 1;
  Eigen::VectorXd x(n), y(n);
  for (;;) {
    arpack::saupd(ido, arpack::bmat::generalized, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv,
                  V.data(), n, iparam.data(), ipntr.data(), workd.data(), workl.data(), lworkl, info);
    if (ido == -1 || ido == 1 || ido == 2) {
      double* in = workd.data() + ipntr[0] - 1;
      double* out = workd.data() + ipntr[1] - 1;
      if (ido == 2) {
        Eigen::Map<Eigen::VectorXd>(out, n) = M * Eigen::Map<const Eigen::VectorXd>(in, n);
      } else if (ido == -1) {
        x = M * Eigen::Map<const Eigen::VectorXd>(in, n);
        Eigen::Map<Eigen::VectorXd>(out, n) = fac.solve(x);
      } else {
        const double* bx = workd.data() + ipntr[2] - 1;
        Eigen::Map<Eigen::VectorXd>(out, n) = fac.solve(Eigen::Map<const Eigen::VectorXd>(bx, n));
      }
      continue;
    }
    break;
  }
  if (info < 0) throw EigenSolverError(Kind::not_converged, "ARPACK saupd error " + std::to_string(info));
  if (info == 1 || iparam[4] < nev)
    throw EigenSolverError(Kind::not_converged, "ARPACK converged " + std::to_string(iparam[4]) + " of " +
                                                    std::to_string(nev) + " eigenpairs");
  std::vector<a_int> select(ncv);
  std::vector<double> d(nev), Z(static_cast<std::size_t>(n) * nev);
  a_int info2 = 0;
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), d.data(), Z.data(), n, sigma,
                arpack::bmat::generalized, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv,
                V.data(), n, iparam.data(), ipntr.data(), workd.data(), workl.data(), lworkl, info2);
  if (info2 != 0) throw EigenSolverError(Kind::not_converged, "ARPACK seupd error " + std::to_string(info2));

  std::vector<int> order(nev);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  GeneralizedEigenpairs out;
  out.values.resize(nev);
  out.vectors.resize(n, nev);
  for (int k = 0; k < nev; ++k) {
    out.values(k) = d[order[k]];
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(Z.data() + static_cast<std::size_t>(order[k]) * n, n);
    v /= std::sqrt(v.dot(M * v));
    // fix the sign so the largest-magnitude entry is positive
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

GeneralizedEigenpairs laplace_eigenpairs(const P2Space& sp, int nev, bool dirichlet) {
  const SparseMatrix K = assemble_stiffness(sp);
  const SparseMatrix M = assemble_mass(sp);
  if (!dirichlet) return solve_generalized(K, M, nev, -1.0);
  std::vector<int> free;
  for (std::size_t i = 0; i < sp.n_dofs(); ++i)
    if (!sp.on_boundary[i]) free.push_back(static_cast<int>(i));
  SparseMatrix P(static_cast<Eigen::Index>(free.size()), static_cast<Eigen::Index>(sp.n_dofs()));
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < free.size(); ++k) trip.emplace_back(static_cast<int>(k), free[k], 1.0);
  P.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix Kf = P * K * P.transpose();
  const SparseMatrix Mf = P * M * P.transpose();
  auto res = solve_generalized(Kf, Mf, nev, 0.0);
  GeneralizedEigenpairs full;
  full.values = res.values;
  full.vectors = P.transpose() * res.vectors;
  return full;
}

}  // namespace oqe::spectral
