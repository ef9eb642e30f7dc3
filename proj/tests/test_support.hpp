#pragma once

// Test-only oracles, independent of the library's evaluation paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testsup {

// Independent ramp-loss implementation for oracle computations.
inline double ramp(double rho, double t) {
  const double v = 1.0 - t / rho;
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

inline double ramp_cbar(double rho, double t, double eta) {
  return eta * ramp(rho, t) + (1.0 - eta) * ramp(rho, -t);
}

// Dense-grid infimum of eta*phi(t) + (1-eta)*phi(-t) over [l, u].
template <typename Phi>
double cbar_grid_inf(Phi phi, double l, double u, double eta, int points) {
  double best = eta * phi(l) + (1.0 - eta) * phi(-l);
  for (int i = 1; i < points; ++i) {
    const double t = l + (u - l) * i / (points - 1);
    best = std::min(best, eta * phi(t) + (1.0 - eta) * phi(-t));
  }
  return best;
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace testsup
