#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "oqe/geom/hyperbolic_triangle.hpp"
#include "oqe/geom/spherical_triangle.hpp"

namespace oqe::geom {

enum class GeometryClass { spherical, euclidean, hyperbolic };

std::string to_string(GeometryClass g);

struct Signature {
  int p{2}, q{3}, r{7};
};

struct SignatureClass {
  GeometryClass geometry;
  /// |2pi (1 - 1/p - 1/q - 1/r)|, the area of the doubled triangle.
  double area;
  /// Euclidean signatures have no compact constant-curvature quotient here.
  bool degenerate;
};

/// Classifies by the sign of 1/p + 1/q + 1/r - 1, computed in exact integers.
SignatureClass classify_signature(int p, int q, int r);

/// One side of the doubled-triangle domain with the rotation mapping it onto its partner.
struct PairedSide {
  std::string label;
  std::string partner;
  Mobius<double> pairing;                 // hyperbolic case
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // spherical case
};

/// The compact orbifold H^2/D+(p,q,r) or S^2/D+(p,q,r): a doubled geodesic
/// triangle with its side pairings and the three cone-point rotations.
struct TriangleOrbifold {
  Signature signature;
  GeometryClass geometry{GeometryClass::hyperbolic};
  double area{0};
  std::variant<HyperbolicTriangle<double>, SphericalTriangle> triangle;
  std::vector<PairedSide> domain;

  std::array<double, 3> angles() const;
  /// 2 x |pi - angle sum| measured on the constructed triangle.
  double numeric_area() const;
  bool is_hyperbolic() const { return geometry == GeometryClass::hyperbolic; }
  const HyperbolicTriangle<double>& hyperbolic() const;
  const SphericalTriangle& spherical() const;
};

TriangleOrbifold build_triangle_group(int p, int q, int r);

}  // namespace oqe::geom
