#include "oqe/spectral/legendre.hpp"

#include <cmath>
#include <cstdlib>

#include "oqe/core/errors.hpp"

namespace oqe::spectral {

std::vector<double> normalized_legendre(int l_max, int m, double x) {
  if (m < 0 || l_max < m) throw DomainError("normalized_legendre: need 0 <= m <= l_max");
  std::vector<double> out(l_max - m + 1);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  // Pbar_m^m = (-1)^m sqrt((2m+1)/(4pi) prod_{k<=m} (2k-1)/(2k)) s^m
  double pmm = 1.0 / std::sqrt(4 * M_PI);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1) / (2.0 * k)) * s;
  out[0] = pmm;
  if (l_max == m) return out;
  out[1] = x * std::sqrt(2.0 * m + 3) * pmm;
  for (int l = m + 2; l <= l_max; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
    const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                               (4.0 * (l - 1) * (l - 1) - 1));
    out[l - m] = a * (x * out[l - 1 - m] - b * out[l - 2 - m]);
  }
  return out;
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  if (am > l) throw DomainError("real_spherical_harmonic: |m| > l");
  const double p = normalized_legendre(l, am, std::cos(theta))[l - am];
  if (m == 0) return p;
  return std::sqrt(2.0) * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

}  // namespace oqe::spectral
