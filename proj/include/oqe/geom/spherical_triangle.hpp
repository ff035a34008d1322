#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

namespace oqe::geom {

/// Spherical triangle with angles pi/p, pi/q, pi/r on the unit sphere.
/// A is the north pole, B lies in the xz-plane; side k is opposite vertex k and
/// is the great circle with unit normal `normals[k]` pointing into the triangle.
struct SphericalTriangle {
  std::array<int, 3> orders{};
  std::array<Eigen::Vector3d, 3> vertices;
  std::array<Eigen::Vector3d, 3> normals;
  std::array<Eigen::Matrix3d, 3> reflections;
  /// Rotations by 2pi/p, 2pi/q, 2pi/r about A, B, C with g_A g_B g_C = I.
  std::array<Eigen::Matrix3d, 3> generators;

  static constexpr int doubling_side = 2;

  bool in_triangle(const Eigen::Vector3d& x, double tol) const;
  bool in_domain(const Eigen::Vector3d& x, double tol) const;
  std::array<double, 3> angles() const;
};

SphericalTriangle build_spherical_triangle(int p, int q, int r);

struct SphericalFoldResult {
  Eigen::Vector3d point;
  Eigen::Matrix3d element;  // rotation with element * input = point
  std::size_t word_length{0};
};

SphericalFoldResult fold_to_domain(const SphericalTriangle& tri, const Eigen::Vector3d& x,
                                   std::size_t cap = 10000);

}  // namespace oqe::geom
