#include "qheat/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace qheat::quad {

// Newton iteration on the Legendre recurrence; points filled in symmetric pairs.
GaussLegendre::GaussLegendre(int order) : x_(order), w_(order) {
  const int n = order;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x_[i] = -z;
    x_[n - 1 - i] = z;
    w_[i] = w_[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

const GaussLegendre& gl16() {
  static const GaussLegendre rule(16);
  return rule;
}

const GaussLegendre& gl32() {
  static const GaussLegendre rule(32);
  return rule;
}

}  // namespace qheat::quad
