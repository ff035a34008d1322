#include "oqe/geom/spherical_triangle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oqe/core/errors.hpp"
#include "oqe/core/scalar.hpp"

namespace oqe::geom {

namespace {

Eigen::Matrix3d reflection_matrix(const Eigen::Vector3d& n) {
  return Eigen::Matrix3d::Identity() - 2.0 * n * n.transpose();
}

}  // namespace

SphericalTriangle build_spherical_triangle(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) throw DomainError("triangle orders must be >= 2");
  if (q * r + p * r + p * q <= p * q * r) throw DomainError("signature is not spherical");
  const double alpha = M_PI / p;
  const double beta = M_PI / q;
  const double gamma = M_PI / r;
  // spherical law of cosines for the angles
  const double len_ab = std::acos((std::cos(gamma) + std::cos(alpha) * std::cos(beta)) /
                                  (std::sin(alpha) * std::sin(beta)));
  const double len_ac = std::acos((std::cos(beta) + std::cos(alpha) * std::cos(gamma)) /
                                  (std::sin(alpha) * std::sin(gamma)));
  SphericalTriangle t;
  t.orders = {p, q, r};
  t.vertices[0] = Eigen::Vector3d(0, 0, 1);
  t.vertices[1] = Eigen::Vector3d(std::sin(len_ab), 0, std::cos(len_ab));
  t.vertices[2] = Eigen::Vector3d(std::sin(len_ac) * std::cos(alpha),
                                  std::sin(len_ac) * std::sin(alpha), std::cos(len_ac));
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d& u = t.vertices[(k + 1) % 3];
    const Eigen::Vector3d& w = t.vertices[(k + 2) % 3];
    Eigen::Vector3d n = u.cross(w).normalized();
    if (n.dot(t.vertices[k]) < 0) n = -n;
    t.normals[k] = n;
    t.reflections[k] = reflection_matrix(n);
  }
  t.generators[0] = t.reflections[1] * t.reflections[2];
  t.generators[1] = t.reflections[2] * t.reflections[0];
  t.generators[2] = t.reflections[0] * t.reflections[1];
  return t;
}

bool SphericalTriangle::in_triangle(const Eigen::Vector3d& x, double tol) const {
  for (int k = 0; k < 3; ++k)
    if (normals[k].dot(x) < -tol) return false;
  return true;
}

bool SphericalTriangle::in_domain(const Eigen::Vector3d& x, double tol) const {
  return in_triangle(x, tol) || in_triangle(reflections[doubling_side] * x, tol);
}

std::array<double, 3> SphericalTriangle::angles() const {
  std::array<double, 3> out{};
  for (int v = 0; v < 3; ++v) {
    const Eigen::Vector3d& P = vertices[v];
    auto tangent = [&](const Eigen::Vector3d& Q) {
      return (Q - P.dot(Q) * P).normalized();
    };
    const double dot = tangent(vertices[(v + 1) % 3]).dot(tangent(vertices[(v + 2) % 3]));
    out[v] = std::acos(std::clamp(dot, -1.0, 1.0));
  }
  return out;
}

SphericalFoldResult fold_to_domain(const SphericalTriangle& tri, const Eigen::Vector3d& x0,
                                   std::size_t cap) {
  const double norm = x0.norm();
  if (!(norm > 0) || !std::isfinite(norm)) throw DomainError("fold_to_domain: point must be nonzero");
  Eigen::Vector3d x = x0 / norm;
  Eigen::Matrix3d word = Eigen::Matrix3d::Identity();
  std::vector<int> letters;
  std::size_t length = 0;
  const double tol = 1e-14;
  for (;;) {
    int worst = -1;
    double worst_value = 0;
    for (int k = 0; k < 3; ++k) {
      const double s = tri.normals[k].dot(x);
      if (s < -tol && s < worst_value) {
        worst = k;
        worst_value = s;
      }
    }
    if (worst < 0) break;
    if (length >= cap) throw FoldError("fold_to_domain: word-length cap exceeded", letters);
    x = tri.reflections[worst] * x;
    word = tri.reflections[worst] * word;
    letters.push_back(worst);
    ++length;
  }
  if (length % 2 == 1) {
    x = tri.reflections[SphericalTriangle::doubling_side] * x;
    word = tri.reflections[SphericalTriangle::doubling_side] * word;
    ++length;
  }
  return {x * norm, word, length};
}

}  // namespace oqe::geom
