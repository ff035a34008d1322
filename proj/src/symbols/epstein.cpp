#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "oqe/core/errors.hpp"
#include "oqe/symbols/symbols.hpp"

namespace oqe::symbols {

namespace {

// Cohen-Rodriguez Villegas-Zagier acceleration of sum_k (-1)^k (2k+1)^-s, s > 0.
double beta_alternating(double s) {
  const int n = 40;
  double d = std::pow(3 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1 / d);
  double b = -1, c = -d, acc = 0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    acc += c * std::pow(2.0 * k + 1, -s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1));
  }
  return acc / d;
}

}  // namespace

double dirichlet_beta(double s) {
  if (s >= 0.5) return beta_alternating(s);
  // beta(1 - x) = (2/pi)^x sin(pi x / 2) Gamma(x) beta(x)
  const double x = 1 - s;
  return std::pow(2 / M_PI, x) * std::sin(M_PI * x / 2) * std::tgamma(x) * beta_alternating(x);
}

double epstein_zeta(double s) {
  if (std::abs(s - 2) < 1e-12) throw PoleError("epstein_zeta: pole at s = 2");
  return 4 * boost::math::zeta(s / 2) * dirichlet_beta(s / 2);
}

}  // namespace oqe::symbols
