#pragma once

#include <string>

#include "oqe/geom/triangle_group.hpp"

namespace oqe::geom {

enum class BackendKind { sphere_quotient, pillowcase, hyperbolic_triangle };

/// Which compact 2-orbifold is instantiated.
///   sphere_quotient(n): S^2 modulo rotation by 2pi/n about the z-axis.
///   pillowcase: flat torus (R/2piZ)^2 modulo x -> -x.
///   hyperbolic_triangle(p,q,r): H^2 modulo the rotation triangle group.
struct GeometryBackend {
  BackendKind kind{BackendKind::hyperbolic_triangle};
  int sphere_n{1};
  Signature signature{};

  static GeometryBackend sphere_quotient(int n);
  static GeometryBackend pillowcase();
  static GeometryBackend hyperbolic_triangle(int p, int q, int r);

  double curvature() const;
  double volume() const;
  std::string tag() const;
};

std::string to_string(BackendKind k);

}  // namespace oqe::geom
