#include "oqe/geom/backend.hpp"

#include <cmath>

#include "oqe/core/errors.hpp"

namespace oqe::geom {

GeometryBackend GeometryBackend::sphere_quotient(int n) {
  if (n < 1) throw DomainError("sphere_quotient: n must be >= 1");
  GeometryBackend b;
  b.kind = BackendKind::sphere_quotient;
  b.sphere_n = n;
  return b;
}

GeometryBackend GeometryBackend::pillowcase() {
  GeometryBackend b;
  b.kind = BackendKind::pillowcase;
  return b;
}

GeometryBackend GeometryBackend::hyperbolic_triangle(int p, int q, int r) {
  const auto cls = classify_signature(p, q, r);
  if (cls.geometry != GeometryClass::hyperbolic)
    throw UnsupportedBackend("hyperbolic_triangle: signature " + std::to_string(p) + "," +
                             std::to_string(q) + "," + std::to_string(r) + " is " +
                             to_string(cls.geometry));
  GeometryBackend b;
  b.kind = BackendKind::hyperbolic_triangle;
  b.signature = {p, q, r};
  return b;
}

double GeometryBackend::curvature() const {
  switch (kind) {
    case BackendKind::sphere_quotient:
      return 1.0;
    case BackendKind::pillowcase:
      return 0.0;
    case BackendKind::hyperbolic_triangle:
      return -1.0;
  }
  return 0.0;
}

double GeometryBackend::volume() const {
  switch (kind) {
    case BackendKind::sphere_quotient:
      return 4.0 * M_PI / sphere_n;
    case BackendKind::pillowcase:
      return 2.0 * M_PI * M_PI;
    case BackendKind::hyperbolic_triangle:
      return classify_signature(signature.p, signature.q, signature.r).area;
  }
  return 0.0;
}

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::sphere_quotient:
      return "sphere_quotient";
    case BackendKind::pillowcase:
      return "pillowcase";
    case BackendKind::hyperbolic_triangle:
      return "hyperbolic_triangle";
  }
  return "unknown";
}

std::string GeometryBackend::tag() const {
  switch (kind) {
    case BackendKind::sphere_quotient:
      return "sphere_quotient(" + std::to_string(sphere_n) + ")";
    case BackendKind::pillowcase:
      return "pillowcase";
    case BackendKind::hyperbolic_triangle:
      return "hyperbolic_triangle(" + std::to_string(signature.p) + "," +
             std::to_string(signature.q) + "," + std::to_string(signature.r) + ")";
  }
  return "unknown";
}

}  // namespace oqe::geom
