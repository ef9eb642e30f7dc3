#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advcal/risk.hpp"

namespace advcal {

// One calibration-function query delta_max(epsilon, x, eta) for a surrogate
// against the adversarial 0/1 target at radius gamma.
struct CalibrationQuery {
  Surrogate surrogate;
  HypothesisFamily family;
  double gamma = 0.2;
  double epsilon = 0.5;
  std::vector<double> x;
  double eta = 0.5;
  GridSpecs grids;
};

enum class DeltaMethod { brute, symmetric_reduction, glm_reduction };

std::string method_name(DeltaMethod m);

// Either a finite constrained infimum with a minimizing witness, or the
// distinguished value "infinite" (empty constraint set). Never a sentinel
// float.
struct CalibrationValue {
  bool infinite = true;
  double value = 0.0;
  std::optional<HypothesisPoint> witness;
  DeltaMethod method = DeltaMethod::brute;
};

// Hypotheses of a parameter grid with their margins and values at a fixed
// (x, gamma); built once and shared across (epsilon, eta) sweeps.
struct GridEvaluation {
  std::vector<HypothesisPoint> hypotheses;
  std::vector<MarginPair> margins;
  std::vector<double> values;  // f(x)
};

GridEvaluation evaluate_param_grid(const HypothesisFamily& family,
                                   std::span<const double> x, double gamma,
                                   const GridSpecs& grids);

// Enumerates the parameter grid, filters hypotheses whose adversarial excess
// risk is at least epsilon, and returns the minimal surrogate excess with
// the argmin witness; infinite when the filter is empty. Minimal risks are
// the grid minima (self-consistent brute force).
CalibrationValue delta_max_bruteforce(const CalibrationQuery& q);
CalibrationValue delta_max_bruteforce(const CalibrationQuery& q,
                                      const GridEvaluation& eval);

// Piecewise reduction of the calibration function: the symmetric-set
// branches (region tag, epsilon vs |2 eta - 1| and max{eta, 1-eta}) with
// constrained infima over the reachable value/margin intervals, or the glm
// analogue over [g(-|x|)-G, g(|x|)+G] with endpoints from a_bounds.
// Quasi-concave-even plain losses use the exact endpoint rule; other
// losses fall back to dense-grid minimization over the same sets.
CalibrationValue delta_max_reduced(const CalibrationQuery& q);

// Grid-infimum diagnostic of the uniform calibration function: the infimum
// of finite delta_max values over an (x, eta) grid. Positive output on a
// grid does not certify uniform calibration.
struct UniformDeltaResult {
  bool infinite = true;
  double value = 0.0;
  double at_x_norm = 0.0;
  double at_eta = 0.0;
};

UniformDeltaResult uniform_delta(const Surrogate& surrogate,
                                 const HypothesisFamily& family, double gamma,
                                 double epsilon, const GridSpecs& grids = {});

struct DeltaCell {
  double epsilon = 0.0;
  double x_norm = 0.0;
  double eta = 0.0;
  CalibrationValue value;
};

// Grid-level calibration verdict: "calibration-violated" when some finite
// delta_max on the (epsilon, |x|, eta) grid is <= tol, otherwise
// "consistent-with-calibration" (grid evidence, not a proof).
struct VerdictReport {
  std::string verdict;
  double tol = 1e-6;
  double gamma = 0.0;
  std::string surrogate_name;
  std::string family_name;
  std::string method;
  std::size_t finite_count = 0;
  std::size_t infinite_count = 0;
  bool has_finite = false;
  double min_finite_delta = 0.0;
  double at_epsilon = 0.0;
  double at_x_norm = 0.0;
  double at_eta = 0.0;
  std::optional<HypothesisPoint> witness;
  std::vector<DeltaCell> cells;
};

struct VerdictGrid {
  std::vector<double> epsilons = {0.1, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> x_norms;  // default: 11 values in (gamma, 1]
  std::vector<double> etas;     // default: 21 values in [0, 1]
};

VerdictGrid default_verdict_grid(double gamma);

VerdictReport calibration_verdict(const Surrogate& surrogate,
                                  const HypothesisFamily& family, double gamma,
                                  const GridSpecs& grids = {}, double tol = 1e-6,
                                  std::optional<VerdictGrid> grid = std::nullopt);

std::string surrogate_name(const Surrogate& s);

}  // namespace advcal
