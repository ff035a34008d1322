#pragma once

#include <vector>

namespace oqe::qe {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
GaussRule gauss_legendre(int n);

}  // namespace oqe::qe
