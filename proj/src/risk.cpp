#include "advcal/risk.hpp"

#include <algorithm>
#include <cmath>

#include "advcal/errors.hpp"

namespace advcal {

double adv01_inner_risk(const MarginPair& margins, double eta) {
  if (margins.lower > margins.upper)
    throw DomainError("adv01_inner_risk: lower margin exceeds upper margin");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw DomainError("adv01_inner_risk: eta outside [0,1]");
  if (margins.lower <= 0.0 && 0.0 <= margins.upper) return 1.0;
  if (margins.upper < 0.0) return eta;
  return 1.0 - eta;
}

double inner_risk(const Surrogate& surrogate, const HypothesisPoint& h,
                  std::span<const double> x, double eta, double gamma,
                  const BallGridSpec& oracle) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("inner_risk: eta outside [0,1]");
  switch (surrogate.form) {
    case LossForm::plain:
      return cbar(surrogate.loss, eval_hypothesis(h, x), eta);
    case LossForm::sup_based: {
      const MarginPair m = adversarial_margins(h, x, gamma, oracle);
      return eta * sup_loss_value(surrogate.loss, m, +1) +
             (1.0 - eta) * sup_loss_value(surrogate.loss, m, -1);
    }
    case LossForm::adv01:
      return adv01_inner_risk(adversarial_margins(h, x, gamma, oracle), eta);
  }
  throw DomainError("inner_risk: unknown loss form");
}

RegionTag region_classify(const HypothesisFamily& family, std::span<const double> x,
                          double gamma, const ParamGridSpec& params,
                          const BallGridSpec& oracle) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("region_classify: gamma outside (0,1)");
  switch (family.kind) {
    case FamilyKind::linear:
      return norm2(x) > gamma ? RegionTag::X2 : RegionTag::X1;
    case FamilyKind::all_measurable:
      return RegionTag::X2;  // the pair (gamma, gamma) has positive lower margin
    case FamilyKind::one_layer_nn: {
      return is_regular_at(family, x, gamma, params, oracle) ? RegionTag::X2
                                                             : RegionTag::X1;
    }
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      throw UnsupportedFamilyError(
          "region_classify: glm reduction applies to all x without region tags");
  }
  throw UnsupportedFamilyError("region_classify: unknown family");
}

namespace {

// The glm reduction normalizes the link so that both signs are reachable at
// every x; minimal adv01 risk is then min{eta, 1-eta} everywhere.
void require_glm_normalized(const HypothesisFamily& family, double gamma) {
  const double pos = family.link(-gamma) + family.bias_bound;
  const double neg = family.link(gamma) - family.bias_bound;
  if (!(pos > 0.0 && neg < 0.0))
    throw UnsupportedReductionError(
        "glm link violates the normalization g(-gamma)+G > 0, g(gamma)-G < 0");
}

}  // namespace

double minimal_inner_risk(const Surrogate& surrogate, const HypothesisFamily& family,
                          std::span<const double> x, double eta, double gamma,
                          const GridSpecs& grids) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw DomainError("minimal_inner_risk: eta outside [0,1]");
  const bool is_glm =
      family.kind == FamilyKind::glm || family.kind == FamilyKind::relu_glm;

  if (surrogate.form == LossForm::adv01) {
    if (is_glm) {
      require_glm_normalized(family, gamma);
      return std::min(eta, 1.0 - eta);
    }
    const RegionTag tag = region_classify(family, x, gamma, grids.params, grids.oracle);
    return tag == RegionTag::X1 ? 1.0 : std::min(eta, 1.0 - eta);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : param_grid(family, grids.params))
    best = std::min(best,
                    inner_risk(surrogate, h, x, eta, gamma, grids.oracle));

  // Exact endpoint rule over the reachable value interval for plain
  // quasi-concave-even losses.
  if (surrogate.form == LossForm::plain) {
    const LossProps& p = surrogate.loss.props();
    const bool endpoint_ok =
        p.quasi_concave_even && p.continuous && p.bounded && p.non_increasing;
    const double r = norm2(x);
    if (endpoint_ok && family.kind == FamilyKind::linear && family.dim >= 2) {
      best = std::min(best, cbar_interval_inf(surrogate.loss, -r, r, eta));
    } else if (endpoint_ok && is_glm) {
      const double lo = family.link(-r) - family.bias_bound;
      const double hi = family.link(r) + family.bias_bound;
      best = std::min(best, cbar_interval_inf(surrogate.loss, lo, hi, eta));
    }
  }
  return best;
}

}  // namespace advcal
