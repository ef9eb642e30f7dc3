#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "advcal/errors.hpp"

namespace advcal {

// Grid for scalar loss/property verification. Default matches the standard
// verification grid: 2001 evenly spaced t in [-3, 3].
struct GridSpec {
  int points = 2001;
  double lo = -3.0;
  double hi = 3.0;
};

// Resolution of the ball grid used by margins_oracle.
struct BallGridSpec {
  int per_axis = 200;
};

// Discretization of parameter spaces for brute-force infima.
struct ParamGridSpec {
  int angles = 720;      // unit vectors for linear/glm, d = 2
  int biases = 41;       // b grid on [-G, G]
  int pair_axis = 41;    // all_measurable per-axis grid on [-R, R]
  int nn_u = 8;          // l1-sphere surface points for u (zero net added)
  int nn_w_radii = 2;    // per-neuron radius grid on (0, W]
  int nn_w_angles = 12;  // per-neuron angle grid
};

// Everything a calibration query needs to discretize.
struct GridSpecs {
  ParamGridSpec params;
  BallGridSpec oracle;
  int interval_points = 4001;  // 1-D fallback minimization grid
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

// Sorted, deduplicated grid on [lo, hi] with extra points (clipped away if
// outside) merged in. Endpoints are always present.
inline std::vector<double> grid_with_points(double lo, double hi, int n,
                                            const std::vector<double>& extra) {
  std::vector<double> g = linspace(lo, hi, std::max(n, 2));
  for (double e : extra)
    if (e > lo && e < hi) g.push_back(e);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

struct ScalarMin {
  double value;
  double arg;
};

// Minimum of fn over an explicit grid; deterministic first-hit tie-breaking.
inline ScalarMin minimize_on_grid(const std::function<double(double)>& fn,
                                  const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("minimize_on_grid: empty grid");
  ScalarMin best{fn(grid.front()), grid.front()};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = fn(grid[i]);
    if (v < best.value) best = {v, grid[i]};
  }
  return best;
}

}  // namespace advcal
