#include "advcal/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "advcal/errors.hpp"

namespace advcal {

namespace {

constexpr double kStrictMargin = 1e-9;  // strict inequalities need this gap
constexpr double kEqualityTol = 1e-9;   // equalities tolerate this gap

// Worst-margin scan: fn(t) must stay >= margin over the grid.
ConditionDetail strict_condition(const std::string& name,
                                 const std::vector<double>& ts,
                                 const std::function<double(double)>& lhs,
                                 const std::function<double(double)>& rhs) {
  ConditionDetail c{name, true, true, 0.0, 0.0, 0.0};
  double worst = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const double l = lhs(t), r = rhs(t);
    if (l - r < worst) {
      worst = l - r;
      c.violating_t = t;
      c.lhs = l;
      c.rhs = r;
    }
  }
  c.pass = worst >= kStrictMargin;
  return c;
}

ConditionDetail equality_condition(const std::string& name,
                                   const std::vector<double>& ts,
                                   const std::function<double(double)>& lhs,
                                   const std::function<double(double)>& rhs) {
  ConditionDetail c{name, true, true, 0.0, 0.0, 0.0};
  double worst = -1.0;
  for (double t : ts) {
    const double l = lhs(t), r = rhs(t);
    if (std::abs(l - r) > worst) {
      worst = std::abs(l - r);
      c.violating_t = t;
      c.lhs = l;
      c.rhs = r;
    }
  }
  c.pass = worst <= kEqualityTol;
  return c;
}

bool qce_verified(const MarginLoss& loss, PropertyReport* out = nullptr) {
  const PropertyReport report = verify_loss_properties(loss);
  if (out) *out = report;
  return loss.props().continuous && report.passed("bounded_flat_tails") &&
         report.passed("non_increasing") && report.passed("cbar_unimodal") &&
         report.passed("cbar_half_even") &&
         report.passed("cbar_half_non_increasing") &&
         report.passed("cbar_monotone_eta_high") &&
         report.passed("cbar_monotone_eta_low") && report.passed("endpoint_rule");
}

std::vector<double> loss_kink_images(const MarginLoss& loss, double gamma, double G) {
  std::vector<double> ks;
  for (double bp : loss.breakpoints()) {
    ks.push_back(bp);
    ks.push_back(-bp);
    ks.push_back(bp - G);
    ks.push_back(G - bp);
    ks.push_back(bp - gamma);
    ks.push_back(bp + gamma);
  }
  ks.push_back(gamma);
  return ks;
}

}  // namespace

std::string predicted_name(Predicted p) {
  switch (p) {
    case Predicted::calibrated:
      return "calibrated";
    case Predicted::not_calibrated:
      return "not_calibrated";
    case Predicted::inapplicable:
      return "inapplicable";
  }
  return "?";
}

const ConditionDetail* TheoremVerdict::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Positive conditions
// ---------------------------------------------------------------------------

TheoremVerdict check_qce_linear(const MarginLoss& loss, double gamma, int t_points) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("check_qce_linear: gamma outside (0,1)");
  TheoremVerdict v;
  v.id = "qce-linear";

  if (!qce_verified(loss)) {
    v.predicted = Predicted::inapplicable;
    v.note = "loss fails the bounded/continuous/non-increasing/quasi-concave-even gate";
    return v;
  }

  // grid on (gamma, 1], kinks inserted
  auto all_ts = grid_with_points(gamma, 1.0, t_points, loss_kink_images(loss, gamma, 0.0));
  std::vector<double> ts;
  for (double t : all_ts)
    if (t > gamma) ts.push_back(t);

  auto phi = [&](double t) { return loss(t); };
  ConditionDetail standing = strict_condition(
      "standing_phi_neg_dominates", ts, [&](double t) { return phi(-t); },
      [&](double t) { return phi(t); });
  v.conditions.push_back(standing);
  if (!standing.pass) {
    v.predicted = Predicted::inapplicable;
    v.note = "standing assumption phi(-t) > phi(t) on (gamma, 1] fails";
    return v;
  }

  ConditionDetail sharp = strict_condition(
      "symmetrized_peak_at_gamma", ts,
      [&](double) { return phi(gamma) + phi(-gamma); },
      [&](double t) { return phi(t) + phi(-t); });
  v.conditions.push_back(sharp);
  v.predicted = sharp.pass ? Predicted::calibrated : Predicted::not_calibrated;

  if (loss.kind() == LossKind::rho_margin) {
    const bool global_threshold = loss.rho() > 1.0;
    ConditionDetail pred{"ramp_all_gamma_threshold", global_threshold, true,
                         0.0, loss.rho(), 1.0};
    v.conditions.push_back(pred);
    if (global_threshold != sharp.pass) {
      v.discrepancy = true;
      v.discrepancy_note =
          "fixed-gamma condition and the all-gamma ramp threshold rho > 1 "
          "disagree at this gamma; both are reported, neither verdict is "
          "silently preferred";
    }
  }
  return v;
}

TheoremVerdict check_qce_glm(const MarginLoss& loss, const MonotoneFn& g, double G,
                             double gamma, int t_points) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("check_qce_glm: gamma outside (0,1)");
  TheoremVerdict v;
  v.id = "qce-glm";

  if (!qce_verified(loss)) {
    v.predicted = Predicted::inapplicable;
    v.note = "loss fails the bounded/continuous/non-increasing/quasi-concave-even gate";
    return v;
  }
  if (!(g(1.0 + gamma) < G && g(-1.0 - gamma) > -G)) {
    v.predicted = Predicted::inapplicable;
    v.note = "link range violates g(1+gamma) < G and g(-1-gamma) > -G";
    return v;
  }

  auto kinks = loss_kink_images(loss, gamma, G);
  for (double bp : g.breakpoints()) {
    kinks.push_back(bp);
    kinks.push_back(-bp);
  }
  const auto ts = grid_with_points(0.0, 1.0, t_points, kinks);

  auto phi = [&](double t) { return loss(t); };
  ConditionDetail standing1 = strict_condition(
      "standing_phi_at_neg_link", ts,
      [&](double t) { return phi(g(-t) - G); },
      [&](double t) { return phi(G - g(-t)); });
  ConditionDetail standing2{"standing_link_sum_nonneg", true, true, 0.0, 0.0, 0.0};
  for (double t : ts) {
    const double s = g(-t) + g(t);
    if (s < standing2.lhs) {
      standing2.lhs = s;
      standing2.violating_t = t;
    }
  }
  standing2.pass = standing2.lhs >= -1e-12;
  v.conditions.push_back(standing1);
  v.conditions.push_back(standing2);
  if (!standing1.pass || !standing2.pass) {
    v.predicted = Predicted::inapplicable;
    v.note = "standing assumptions on the link fail";
    return v;
  }

  ConditionDetail equality = equality_condition(
      "extreme_symmetrized_equality", ts,
      [&](double t) { return phi(G - g(-t)) + phi(g(-t) - G); },
      [&](double t) { return phi(g(t) + G) + phi(-g(t) - G); });
  ConditionDetail strict = strict_condition(
      "increment_dominance", ts,
      [&](double t) {
        const auto [up, lo] = a_bounds(g, t, gamma);
        return std::min(phi(up) + phi(-up), phi(lo) + phi(-lo));
      },
      [&](double t) { return phi(G - g(-t)) + phi(g(-t) - G); });
  v.conditions.push_back(equality);
  v.conditions.push_back(strict);
  v.predicted = (equality.pass && strict.pass) ? Predicted::calibrated
                                               : Predicted::not_calibrated;
  return v;
}

TheoremVerdict check_relu_corollary(const MarginLoss& loss, double G, double gamma,
                                    int t_points) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("check_relu_corollary: gamma outside (0,1)");
  TheoremVerdict v;
  v.id = "relu-corollary";

  if (!(G > 1.0 + gamma)) {
    v.predicted = Predicted::inapplicable;
    v.note = "requires G > 1 + gamma";
    return v;
  }
  if (!qce_verified(loss)) {
    v.predicted = Predicted::inapplicable;
    v.note = "loss fails the bounded/continuous/non-increasing/quasi-concave-even gate";
    return v;
  }
  auto phi = [&](double t) { return loss(t); };
  if (!(phi(-G) - phi(G) >= kStrictMargin)) {
    v.predicted = Predicted::inapplicable;
    v.note = "requires phi(-G) > phi(G)";
    return v;
  }

  const auto ts = grid_with_points(0.0, 1.0, t_points, loss_kink_images(loss, gamma, G));
  ConditionDetail equality = equality_condition(
      "flat_beyond_bias_bound", ts,
      [&](double) { return phi(G) + phi(-G); },
      [&](double t) { return phi(t + G) + phi(-t - G); });
  ConditionDetail strict = strict_condition(
      "gamma_dominates_bias_bound", {gamma},
      [&](double t) { return phi(t) + phi(-t); },
      [&](double) { return phi(G) + phi(-G); });
  v.conditions.push_back(equality);
  v.conditions.push_back(strict);
  v.predicted = (equality.pass && strict.pass) ? Predicted::calibrated
                                               : Predicted::not_calibrated;
  return v;
}

// ---------------------------------------------------------------------------
// Negative witnesses
// ---------------------------------------------------------------------------

NegativeWitness convex_negative_witness(const Surrogate& surrogate,
                                        const HypothesisFamily& family,
                                        double gamma, const GridSpecs& grids) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("convex_negative_witness: gamma outside (0,1)");
  if (surrogate.form == LossForm::adv01)
    throw UnsupportedReductionError("convex_negative_witness: surrogate form only");
  const MarginLoss& phi = surrogate.loss;
  const PropertyReport props = verify_loss_properties(phi);
  if (!props.passed("convex"))
    throw UnsupportedReductionError(
        "convex_negative_witness: loss fails the convexity verifier");
  if (surrogate.form == LossForm::sup_based && !props.passed("non_increasing"))
    throw UnsupportedReductionError(
        "convex_negative_witness: sup form needs a non-increasing loss");

  NegativeWitness w;
  const bool sup = surrogate.form == LossForm::sup_based;
  const MonotoneFn& g = family.link;
  const double G = family.bias_bound;

  switch (family.kind) {
    case FamilyKind::linear: {
      if (family.dim < 2)
        throw UnsupportedReductionError(
            "linear witness needs d >= 2 (no unit w vanishes at x0 in 1-D)");
      w.x0.assign(static_cast<std::size_t>(family.dim), 0.0);
      w.x0[0] = 0.5 * (1.0 + gamma);  // distinguishing: gamma < |x0| <= 1
      std::vector<double> perp(static_cast<std::size_t>(family.dim), 0.0);
      perp[1] = 1.0;
      w.f0 = HypothesisPoint::linear(family, perp);
      w.expected_inner_risk = sup ? phi(-gamma) : phi(0.0);
      break;
    }
    case FamilyKind::glm:
    case FamilyKind::relu_glm: {
      if (!(g(-gamma) + G > 0.0 && g(gamma) - G < 0.0))
        throw UnsupportedReductionError(
            "glm witness needs g(-gamma)+G > 0 and g(gamma)-G < 0 (0 distinguishing)");
      w.x0.assign(static_cast<std::size_t>(family.dim), 0.0);
      std::vector<double> e1(static_cast<std::size_t>(family.dim), 0.0);
      e1[0] = 1.0;
      const double b0 = sup ? -0.5 * (g(gamma) + g(-gamma)) : -g(0.0);
      if (std::abs(b0) > G)
        throw UnsupportedReductionError("glm witness bias exceeds the bias bound");
      w.f0 = HypothesisPoint::glm(family, e1, b0);
      w.expected_inner_risk = sup ? phi(0.5 * (g(-gamma) - g(gamma))) : phi(0.0);
      break;
    }
    case FamilyKind::one_layer_nn: {
      w.x0.assign(static_cast<std::size_t>(family.dim), 0.0);
      w.x0[0] = 0.5 * (1.0 + gamma);
      if (!is_regular_at(family, w.x0, gamma, grids.params, grids.oracle))
        throw UnsupportedReductionError("one_layer_nn witness: x0 is not regular");
      std::vector<double> u(static_cast<std::size_t>(family.width), 0.0);
      std::vector<std::vector<double>> W(
          static_cast<std::size_t>(family.width),
          std::vector<double>(static_cast<std::size_t>(family.dim), 0.0));
      w.f0 = HypothesisPoint::one_layer_nn(family, std::move(u), std::move(W));
      w.expected_inner_risk = phi(0.0);  // f0 = 0: plain and sup coincide
      break;
    }
    case FamilyKind::all_measurable: {
      w.x0.assign(static_cast<std::size_t>(family.dim), 0.0);
      w.x0[0] = 0.5 * (1.0 + gamma);
      w.f0 = HypothesisPoint::all_measurable(family, 0.0, 0.0);
      w.expected_inner_risk = phi(0.0);
      break;
    }
  }

  w.surrogate_inner_risk = inner_risk(surrogate, w.f0, w.x0, w.eta, gamma, grids.oracle);
  CalibrationQuery q{surrogate, family, gamma, w.epsilon, w.x0, w.eta, grids};
  w.delta = family.kind == FamilyKind::one_layer_nn ? delta_max_bruteforce(q)
                                                    : delta_max_reduced(q);
  return w;
}

// ---------------------------------------------------------------------------
// Unconditional positive result and the trivial-calibration check
// ---------------------------------------------------------------------------

TheoremVerdict sup_rho_positive_check(double rho, const HypothesisFamily& family,
                                      double gamma, const GridSpecs& grids,
                                      double tol) {
  TheoremVerdict v;
  v.id = "sup-rho";
  if (!family.symmetric()) {
    v.predicted = Predicted::inapplicable;
    v.note = "family is not symmetric";
    return v;
  }
  v.predicted = Predicted::calibrated;
  const VerdictReport sweep = calibration_verdict(
      Surrogate::sup(MarginLoss::rho_margin(rho)), family, gamma, grids, tol);
  v.crosscheck_agrees = sweep.verdict == "consistent-with-calibration";
  if (sweep.has_finite) v.crosscheck_min_finite_delta = sweep.min_finite_delta;
  v.note = v.crosscheck_agrees ? "numeric sweep agrees"
                               : "numeric sweep found a near-zero finite delta";
  return v;
}

TheoremVerdict regularity_theorem_check(const HypothesisFamily& family, double gamma,
                                        const std::vector<double>& x_norms,
                                        const GridSpecs& grids) {
  TheoremVerdict v;
  v.id = "regularity";
  if (!family.symmetric()) {
    v.predicted = Predicted::inapplicable;
    v.note = "family is not symmetric";
    return v;
  }
  double first_regular = -1.0;
  for (double r : x_norms) {
    std::vector<double> x(static_cast<std::size_t>(family.dim), 0.0);
    x[0] = r;
    if (is_regular_at(family, x, gamma, grids.params, grids.oracle)) {
      first_regular = r;
      break;
    }
  }
  if (first_regular >= 0.0) {
    v.predicted = Predicted::inapplicable;
    v.note = "a regular x exists in the sampled region; no trivial-calibration claim";
    ConditionDetail c{"regular_x_found", false, true, first_regular, 0.0, 0.0};
    v.conditions.push_back(c);
    return v;
  }
  v.predicted = Predicted::calibrated;
  v.note = "no sampled x is regular: every surrogate is calibrated on this region";
  // Cross-check: the calibration function is infinite at sampled queries.
  bool all_infinite = true;
  const Surrogate probe = Surrogate::sup(MarginLoss::rho_margin(1.0));
  for (double r : x_norms) {
    std::vector<double> x(static_cast<std::size_t>(family.dim), 0.0);
    x[0] = r;
    for (double eta : {0.0, 0.3, 0.5, 0.8, 1.0}) {
      CalibrationQuery q{probe, family, gamma, 0.25, x, eta, grids};
      const CalibrationValue d = family.kind == FamilyKind::one_layer_nn
                                     ? delta_max_bruteforce(q)
                                     : delta_max_reduced(q);
      if (!d.infinite) all_infinite = false;
    }
  }
  v.crosscheck_agrees = all_infinite;
  return v;
}

}  // namespace advcal
