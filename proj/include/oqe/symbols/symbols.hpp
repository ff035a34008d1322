#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oqe/geom/backend.hpp"
#include "oqe/qe/observable.hpp"
#include "oqe/spectral/eigen_system.hpp"

namespace oqe::symbols {

using complex = std::complex<double>;

/// h(arg xi) |xi|^degree
struct HomogeneousTerm {
  complex degree;
  std::function<double(double)> h;
  /// h is the constant h(0).
  bool radial{false};

  static HomogeneousTerm constant(complex degree, double c);
};

/// Smooth radial step: 0 for r <= 1/2, 1 for r >= 1.
double default_cutoff(double r);

/// x-independent classical symbol
///   theta(|xi|) sum_j h_j(arg xi) |xi|^{z-j}  +  remainder(|xi|, arg xi)
/// with an integrable remainder (absent means 0).
struct ClassicalSymbol {
  complex order;
  std::vector<HomogeneousTerm> terms;
  std::function<double(double)> cutoff{default_cutoff};
  std::function<double(double, double)> remainder;
  bool remainder_radial{true};

  complex operator()(double r, double phi) const;
};

ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b);
ClassicalSymbol operator*(double s, const ClassicalSymbol& a);
/// Pointwise product (composition of multipliers).
ClassicalSymbol multiply(const ClassicalSymbol& a, const ClassicalSymbol& b);

/// (1 + |xi|^2)^(-2) = sum_{j <= J} (j+1)(-1)^j |xi|^{-4-2j} away from 0, with the exact remainder.
ClassicalSymbol japanese_bracket_symbol(int J = 4);

/// Single term h |xi|^degree with the default cutoff.
ClassicalSymbol homogeneous_symbol(HomogeneousTerm t);

struct Obstruction {
  int alpha1{0}, alpha2{0};
  double value{0};
};

/// S(eta^alpha sigma) = int_{|eta|=1} eta^alpha sigma for |alpha| = k; the term must have degree -2-k.
std::vector<Obstruction> obstruction_coefficients(const HomogeneousTerm& term, int k);

/// (2pi)^-2 [ sum_j S(h_j) FP int_0^inf theta r^{d_j+1} dr + int remainder ].
complex finite_part(const ClassicalSymbol& symbol);

/// Sum'_{m in Z^2} |m|^-s = 4 zeta(s/2) beta(s/2), continued to s != 2.
double epstein_zeta(double s);

/// Dirichlet beta function, all real arguments.
double dirichlet_beta(double s);

/// (1/2)(2pi)^2 finite_part: the chart-symbol integral without the periodization term.
complex chart_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend);

/// Canonical trace of the multiplier on the pillowcase:
///   (1/2) [ sum_{m in Z^2} remainder(m) + sum_j Z_{h_j}(-d_j) ]
/// with Z_h the Epstein sum of h(arg m)|m|^d, zeta-continued for radial terms.
complex canonical_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend);

/// (1/2) int_{|xi|=1} k_{-2}; 0 without a degree -2 term.
double residue_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend);

/// sigma_A |xi|^-2 for a pillowcase observable (position kinds enter through omega(A)).
ClassicalSymbol residue_symbol(const qe::Observable& obs, const geom::GeometryBackend& backend);

struct ZetaProbe {
  double z0{-2};
  std::vector<double> eps;
  std::vector<double> zeta_values;
  /// -eps zeta_A(z0 - eps)
  std::vector<double> scaled;
  double residue{0};
  double uncertainty{0};
  int sign{0};
  /// fitted tail N_A ~ C lambda^2 + D lambda
  double tail_C{0}, tail_D{0};
};

/// R = lim_{eps -> 0+} -eps zeta_A(-2 - eps), zeta_A(z) = sum_j value_j lambda_j^z over lambda_j > 0.
ZetaProbe zeta_residue(const spectral::EigenSystem& eig, const qe::Observable& obs,
                       const std::vector<double>& eps = {0.2, 0.1, 0.05, 0.02});

}  // namespace oqe::symbols
