#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "oqe/geom/hyperbolic_triangle.hpp"

namespace oqe::spectral {

/// Triangle mesh in Poincare-disk coordinates.
/// Local edge e of triangle t joins vertices e and (e+1)%3; its boundary side
/// is packed in tags[t] as 2 bits per edge: 0 interior, s+1 on side s.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tags;
  int refinement{-1};

  int edge_side(std::size_t t, int e) const { return ((tags[t] >> (2 * e)) & 3) - 1; }
  std::size_t n_vertices() const { return vertices.size(); }
  std::size_t n_triangles() const { return triangles.size(); }
};

/// Subdivisions per side at a refinement level: 2^(level+2).
int subdivisions(int refinement);

/// Uniform subdivision of the geodesic triangle T (side k opposite vertex k).
/// Built in Klein coordinates, where T is a straight triangle, so refinements nest
/// and the curved sides are represented exactly; stored in disk coordinates.
Mesh triangle_mesh(const geom::HyperbolicTriangle<double>& tri, int refinement);

/// Unit disk as 6 sectors; boundary vertices lie on the circle, side index 0.
Mesh unit_disk_mesh(int refinement);

/// Checks orientation, edge conformity and that tagged edges are exactly the
/// boundary edges and cover sides 0..n_sides-1. Throws MeshError.
void validate_mesh(const Mesh& mesh, int n_sides);

void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);

/// Klein <-> Poincare disk coordinate changes.
Eigen::Vector2d disk_to_klein(const Eigen::Vector2d& w);
Eigen::Vector2d klein_to_disk(const Eigen::Vector2d& k);

}  // namespace oqe::spectral
