#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oqe/qe/observable.hpp"
#include "oqe/spectral/eigen_system.hpp"

namespace oqe::qe {

/// (lambda_j, <A psi_j, psi_j>) for j ascending.
struct MatrixElementSeries {
  geom::GeometryBackend backend;
  std::string observable;
  double omega{0};
  double group_tolerance{1e-6};
  std::vector<double> lambdas;
  std::vector<double> values;
};

MatrixElementSeries matrix_elements(const spectral::EigenSystem& eig, const Observable& obs);

/// Elementwise sum of two series over the same spectrum.
MatrixElementSeries operator+(const MatrixElementSeries& a, const MatrixElementSeries& b);

/// N_A sampled midway between consecutive distinct eigenvalues within [top/10, top].
struct CountingSamples {
  std::vector<double> lambda;
  std::vector<double> N;
};

CountingSamples top_decade_samples(const MatrixElementSeries& series);

struct WeylFit {
  double C{0};
  double predicted{0};
  double relative_error{0};
  /// Free log-log slope; should be close to 2.
  double exponent{0};
  std::size_t points{0};
  double lambda_low{0}, lambda_high{0};
};

/// Fits N_A(lambda) = C lambda^2 over the top decade of the series. N_A is
/// sampled midway between consecutive distinct eigenvalues.
WeylFit local_weyl_fit(const MatrixElementSeries& series);

/// Identity-observable fit directly from a spectrum.
WeylFit weyl_fit(const spectral::EigenSystem& eig);

/// vol(X) / (4 pi)
double weyl_constant(const geom::GeometryBackend& backend);

struct PointwiseWeyl {
  double measured{0};
  double predicted{0};
  double ratio{0};
  std::size_t count{0};
};

/// sum_{lambda_j <= lambda} |psi_j(x)|^2 against |G_x| lambda^2 / (4 pi). Sphere backend.
PointwiseWeyl pointwise_weyl(const spectral::EigenSystem& eig, double theta, double phi, int group_order,
                             double lambda);

/// Same at the north pole, where the local group has order n.
PointwiseWeyl pointwise_weyl_at_cone(const spectral::EigenSystem& eig, int cone_order, double lambda);

struct QeProfile {
  std::vector<double> lambda;
  std::vector<std::size_t> count;
  std::vector<double> variance;
  std::vector<double> excluded_fraction;

  /// Index of the last profile point with lambda <= l.
  std::size_t index_at(double l) const;
  double variance_at(double l) const { return variance[index_at(l)]; }
  double excluded_at(double l) const { return excluded_fraction[index_at(l)]; }
};

/// V(lambda) and the fraction of j with |value_j - omega| > eps, evaluated at
/// the top of every group of equal eigenvalues.
QeProfile qe_variance_and_density(const MatrixElementSeries& series, double omega, double eps);

struct DefectReport {
  double norm{0};
  double ratio{0};
  std::size_t count{0};
  std::size_t largest_block{0};
};

/// || E_l <A> E_l - omega I ||, with <A> the compression of A onto the eigenspaces of P.
DefectReport operator_average_defect(const spectral::EigenSystem& eig, const Observable& obs, double lambda);

/// Dense block <A psi_i, psi_j> for i, j in [first, first + size).
Eigen::MatrixXd matrix_block(const spectral::EigenSystem& eig, const Observable& obs, std::size_t first,
                             std::size_t size);

/// max over lattice k with k_min <= |k| <= k_max of
/// | (|k| - |k+m|) + m.k/|k| |   (t = 1).
double egorov_phase_check(const Eigen::Vector2i& m, double k_min, double k_max);

}  // namespace oqe::qe
