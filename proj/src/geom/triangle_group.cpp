#include "oqe/geom/triangle_group.hpp"

#include <cmath>

#include "oqe/core/errors.hpp"

namespace oqe::geom {

std::string to_string(GeometryClass g) {
  switch (g) {
    case GeometryClass::spherical:
      return "spherical";
    case GeometryClass::euclidean:
      return "euclidean";
    case GeometryClass::hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

SignatureClass classify_signature(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) throw DomainError("classify_signature: orders must be >= 2");
  const long long lhs = static_cast<long long>(q) * r + static_cast<long long>(p) * r +
                        static_cast<long long>(p) * q;
  const long long rhs = static_cast<long long>(p) * q * r;
  const double excess = 1.0 / p + 1.0 / q + 1.0 / r - 1.0;
  if (lhs == rhs) return {GeometryClass::euclidean, 0.0, true};
  const double area = 2.0 * M_PI * std::abs(excess);
  return {lhs < rhs ? GeometryClass::hyperbolic : GeometryClass::spherical, area, false};
}

std::array<double, 3> TriangleOrbifold::angles() const {
  if (auto* h = std::get_if<HyperbolicTriangle<double>>(&triangle)) return h->angles();
  return std::get<SphericalTriangle>(triangle).angles();
}

double TriangleOrbifold::numeric_area() const {
  const auto a = angles();
  return 2.0 * std::abs(M_PI - (a[0] + a[1] + a[2]));
}

const HyperbolicTriangle<double>& TriangleOrbifold::hyperbolic() const {
  if (auto* h = std::get_if<HyperbolicTriangle<double>>(&triangle)) return *h;
  throw DomainError("TriangleOrbifold: not hyperbolic");
}

const SphericalTriangle& TriangleOrbifold::spherical() const {
  if (auto* s = std::get_if<SphericalTriangle>(&triangle)) return *s;
  throw DomainError("TriangleOrbifold: not spherical");
}

TriangleOrbifold build_triangle_group(int p, int q, int r) {
  const SignatureClass cls = classify_signature(p, q, r);
  if (cls.degenerate) throw DomainError("build_triangle_group: euclidean signature rejected");
  TriangleOrbifold orb;
  orb.signature = {p, q, r};
  orb.geometry = cls.geometry;
  orb.area = cls.area;
  // Kite A-C-B-C' with C' the mirror of C across AB. The rotation about A
  // carries AC' onto AC, the inverse rotation about B carries BC' onto BC.
  if (cls.geometry == GeometryClass::hyperbolic) {
    auto tri = build_hyperbolic_triangle<double>(p, q, r);
    orb.domain = {
        {"AC'", "AC", tri.generators[0], Eigen::Matrix3d::Identity()},
        {"BC'", "BC", tri.generators[1].inverse(), Eigen::Matrix3d::Identity()},
        {"AC", "AC'", tri.generators[0].inverse(), Eigen::Matrix3d::Identity()},
        {"BC", "BC'", tri.generators[1], Eigen::Matrix3d::Identity()},
    };
    orb.triangle = std::move(tri);
  } else {
    auto tri = build_spherical_triangle(p, q, r);
    orb.domain = {
        {"AC'", "AC", Mobius<double>::identity(), tri.generators[0]},
        {"BC'", "BC", Mobius<double>::identity(), tri.generators[1].transpose()},
        {"AC", "AC'", Mobius<double>::identity(), tri.generators[0].transpose()},
        {"BC", "BC'", Mobius<double>::identity(), tri.generators[1]},
    };
    orb.triangle = std::move(tri);
  }
  return orb;
}

}  // namespace oqe::geom
