#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advcal/calibration.hpp"

namespace advcal {

enum class Predicted { calibrated, not_calibrated, inapplicable };

std::string predicted_name(Predicted p);

struct ConditionDetail {
  std::string name;
  bool pass = false;
  bool applicable = true;
  double violating_t = 0.0;  // grid location of the worst violation
  double lhs = 0.0;
  double rhs = 0.0;
};

struct TheoremVerdict {
  std::string id;
  Predicted predicted = Predicted::inapplicable;
  std::vector<ConditionDetail> conditions;
  bool discrepancy = false;
  std::string discrepancy_note;
  std::string note;
  // numeric cross-check summary (filled when a verdict sweep was run)
  std::optional<double> crosscheck_min_finite_delta;
  bool crosscheck_agrees = true;

  const ConditionDetail* find(const std::string& name) const;
};

// Sharpness condition for plain quasi-concave-even losses on the linear
// family: the symmetrized loss at gamma strictly dominates its value at
// every t in (gamma, 1]. For the ramp loss the fixed-gamma condition is
// also compared against the all-gamma threshold rho > 1, and any
// disagreement is flagged instead of silently resolved.
TheoremVerdict check_qce_linear(const MarginLoss& loss, double gamma,
                                int t_points = 1001);

// GLM analogue: symmetrized-loss equality between the two reachable value
// extremes plus strict dominance by the link-increment endpoints, on a
// t-grid over [0, 1].
TheoremVerdict check_qce_glm(const MarginLoss& loss, const MonotoneFn& g, double G,
                             double gamma, int t_points = 1001);

// Specialization for the relu link with G > 1 + gamma: constant symmetrized
// loss beyond G plus strict dominance at gamma.
TheoremVerdict check_relu_corollary(const MarginLoss& loss, double G, double gamma,
                                    int t_points = 1001);

// Zero-surrogate-excess certificate for convex losses: a point x0 and
// hypothesis f0 whose surrogate inner risk at eta = 1/2 equals the
// unconstrained infimum while the adversarial excess is 1/2, so
// delta_max(1/2, x0, 1/2) = 0.
struct NegativeWitness {
  std::vector<double> x0;
  HypothesisPoint f0;
  double eta = 0.5;
  double epsilon = 0.5;
  double surrogate_inner_risk = 0.0;
  double expected_inner_risk = 0.0;
  CalibrationValue delta;
};

NegativeWitness convex_negative_witness(const Surrogate& surrogate,
                                        const HypothesisFamily& family,
                                        double gamma, const GridSpecs& grids = {});

// Sup-based ramp loss on a symmetric family: calibrated unconditionally;
// the verdict records the numeric sweep as a cross-check.
TheoremVerdict sup_rho_positive_check(double rho, const HypothesisFamily& family,
                                      double gamma, const GridSpecs& grids = {},
                                      double tol = 1e-6);

// When no sampled x is regular, every surrogate is trivially calibrated on
// the sampled region; cross-checks that delta_max is infinite there.
TheoremVerdict regularity_theorem_check(const HypothesisFamily& family, double gamma,
                                        const std::vector<double>& x_norms,
                                        const GridSpecs& grids = {});

}  // namespace advcal
