#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oqe/geom/backend.hpp"

namespace oqe::qe {

enum class ObservableKind { position, direction };

/// Zeroth-order observable.
///   position: multiplication by f(x1, x2) in the backend chart
///     (sphere (theta, phi), pillowcase (x1, x2), hyperbolic half-plane (x, y)
///     on the doubled triangle); f must be invariant under the orbifold group.
///   direction: Fourier multiplier a(arg xi), flat backends only.
struct Observable {
  std::string name;
  ObservableKind kind{ObservableKind::position};
  std::function<double(double, double)> f;
  std::function<double(double)> a;
  std::optional<double> exact_average;
  /// sup |sigma_A| when known.
  std::optional<double> sup_bound;

  static Observable position(std::string name, std::function<double(double, double)> f,
                             std::optional<double> exact_average = std::nullopt);
  static Observable direction(std::string name, std::function<double(double)> a,
                              std::optional<double> exact_average = std::nullopt);
};

/// Sum of two observables of the same kind.
Observable operator+(const Observable& a, const Observable& b);

/// Named catalogue:
///   every backend: one
///   sphere: cos_theta, cos2theta, zonal_exp, sectoral
///   pillowcase: cos_x1, exp_cos, cos2dir, cos4dir
///   hyperbolic: ball, bump_a, bump_b, bump_in
Observable make_qe_observable(const std::string& name, const geom::GeometryBackend& backend);

/// The three observables used for local-Weyl and QE checks on a backend.
std::vector<std::string> test_observable_names(geom::BackendKind kind);

/// omega(A): base average of f over X, or circle average of a.
double liouville_average(const Observable& obs, const geom::GeometryBackend& backend);

}  // namespace oqe::qe
