#pragma once

#include <string>
#include <utility>
#include <vector>

#include "advcal/grid.hpp"

namespace advcal {

enum class LossKind { zero_one, rho_margin, hinge, logistic, exponential, custom_table };

// Analytic properties a loss declares about itself. Declarations are
// contracts: the numerical verifier must confirm them on the standard grid.
struct LossProps {
  bool convex = false;
  bool non_increasing = false;
  bool bounded = false;
  bool continuous = false;
  bool quasi_concave_even = false;
};

// Lower and upper adversarial margins of a hypothesis at a point:
// (inf, sup) of f over the gamma-ball. Defined here because the sup-based
// loss evaluation consumes it directly.
enum class MarginMethod { closed_form, grid_oracle };

struct MarginPair {
  double lower = 0.0;
  double upper = 0.0;
  MarginMethod method = MarginMethod::closed_form;
};

// A scalar margin loss phi: R -> R+ with declared properties.
class MarginLoss {
 public:
  static MarginLoss zero_one();
  static MarginLoss rho_margin(double rho);
  static MarginLoss hinge();
  static MarginLoss logistic();
  static MarginLoss exponential();
  // Piecewise-linear interpolation of (t, phi(t)) rows, constant beyond the
  // table range. Declared properties are checked on the standard grid and
  // rejected if they fail.
  static MarginLoss custom_table(std::vector<std::pair<double, double>> points,
                                 LossProps declared);

  double operator()(double t) const;

  LossKind kind() const { return kind_; }
  double rho() const { return rho_; }
  const LossProps& props() const { return props_; }
  const std::string& name() const { return name_; }
  // t-locations where the loss is non-smooth; used to make piecewise-linear
  // minimization exact.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  MarginLoss() = default;

  LossKind kind_ = LossKind::hinge;
  double rho_ = 1.0;
  std::vector<std::pair<double, double>> table_;
  LossProps props_;
  std::string name_;
  std::vector<double> breakpoints_;
};

double eval_loss(const MarginLoss& loss, double t);

// Worst-case loss value at a labelled point from its margin pair:
// phi(inf over the ball of y*f). Only defined for non-increasing losses,
// where the sup of phi(y f) equals phi of the inf of y f.
double sup_loss_value(const MarginLoss& loss, const MarginPair& margins, int y);

// Two-point conditional risk eta*phi(t) + (1-eta)*phi(-t).
double cbar(const MarginLoss& loss, double t, double eta);

struct IntervalInf {
  double value = 0.0;
  double arg = 0.0;
  bool endpoint_exact = false;  // false => dense-grid approximation
};

// Infimum of cbar(., eta) over [l, u]. For losses declared quasi-concave
// even, continuous, bounded and non-increasing the infimum sits at an
// endpoint; otherwise a dense grid (with breakpoints merged in) is used and
// the result is flagged approximate.
IntervalInf cbar_interval_inf_full(const MarginLoss& loss, double l, double u,
                                   double eta, int grid_points = 10001);
double cbar_interval_inf(const MarginLoss& loss, double l, double u, double eta,
                         int grid_points = 10001);

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double worst_violation = 0.0;
  double at = 0.0;  // grid location of the worst violation
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  const PropertyCheck* find(const std::string& name) const;
  bool passed(const std::string& name) const;
  // True when every property the loss declares is confirmed by the
  // corresponding check.
  bool declared_consistent(const LossProps& declared) const;
};

// Numerical verification of the declared-property vocabulary on a grid:
// convexity (midpoint test), monotonicity, flat tails (boundedness proxy),
// and the operational consequences of quasi-concave-evenness: unimodality of
// cbar(., eta), evenness and one-sided monotonicity of cbar(., 1/2),
// one-sided monotonicity for eta above/below 1/2, and the endpoint rule
// against a dense-grid infimum on random intervals.
PropertyReport verify_loss_properties(const MarginLoss& loss,
                                      const GridSpec& grid = {});

}  // namespace advcal
