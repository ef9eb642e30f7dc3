#pragma once

#include <span>

#include "advcal/hypotheses.hpp"
#include "advcal/losses.hpp"

namespace advcal {

enum class LossForm { plain, sup_based, adv01 };

// A surrogate is a margin loss together with the form it is applied in.
// The adversarial 0/1 target is the sup-based form of the 0/1 loss.
struct Surrogate {
  LossForm form = LossForm::plain;
  MarginLoss loss = MarginLoss::hinge();

  static Surrogate plain(MarginLoss phi) { return {LossForm::plain, std::move(phi)}; }
  static Surrogate sup(MarginLoss phi) { return {LossForm::sup_based, std::move(phi)}; }
  static Surrogate adversarial01() { return {LossForm::adv01, MarginLoss::zero_one()}; }
};

// Piecewise inner risk of the adversarial 0/1 loss from the margin pair:
// 1 when the ball straddles zero, eta when f is negative on the ball,
// 1-eta when f is positive on it. Comparisons are exact (no tolerance).
double adv01_inner_risk(const MarginPair& margins, double eta);

// Conditional risk eta*loss(f,x,+1) + (1-eta)*loss(f,x,-1) for the given
// loss form.
double inner_risk(const Surrogate& surrogate, const HypothesisPoint& h,
                  std::span<const double> x, double eta, double gamma,
                  const BallGridSpec& oracle = {});

enum class RegionTag { X1, X2 };

// X2: some family member is strictly positive on the whole gamma-ball
// around x; X1: every member's ball straddles zero. Defined for symmetric
// families only; glm is rejected (its reduction needs no tags).
RegionTag region_classify(const HypothesisFamily& family, std::span<const double> x,
                          double gamma, const ParamGridSpec& params = {},
                          const BallGridSpec& oracle = {});

// inf over the family of the conditional risk. Analytic for adv01; grid
// minimum (plus the exact endpoint rule for quasi-concave-even plain losses
// on linear/glm) for surrogates.
double minimal_inner_risk(const Surrogate& surrogate, const HypothesisFamily& family,
                          std::span<const double> x, double eta, double gamma,
                          const GridSpecs& grids = {});

}  // namespace advcal
