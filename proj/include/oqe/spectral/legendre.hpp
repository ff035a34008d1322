#pragma once

#include <vector>

namespace oqe::spectral {

/// Orthonormal associated Legendre functions
///   Pbar_l^m(x) = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m(x), Condon-Shortley phase,
/// for l = m..l_max (index l - m). Then Y_lm = Pbar_l^m(cos theta) e^{i m phi}.
std::vector<double> normalized_legendre(int l_max, int m, double x);

/// Real spherical harmonic: Pbar_l^|m| times sqrt2 cos(m phi) (m > 0),
/// sqrt2 sin(|m| phi) (m < 0), 1 (m = 0). Unit L2 norm on S^2.
double real_spherical_harmonic(int l, int m, double theta, double phi);

}  // namespace oqe::spectral
