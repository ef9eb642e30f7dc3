#include "advcal/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "advcal/errors.hpp"

namespace advcal {

namespace {

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; identical across platforms for a fixed seed.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Margins of y * f at (x, gamma); realizability asks for a positive lower
// margin.
double signed_lower_margin(const HypothesisPoint& f, int y,
                           std::span<const double> x, double gamma) {
  const MarginPair m = adversarial_margins(f, x, gamma);
  return y == 1 ? m.lower : -m.upper;
}

}  // namespace

Sample sample_distribution(const SyntheticDistribution& dist, int n) {
  if (n < 1) throw ConfigError("sample_distribution: need n >= 1");
  if (!(dist.gamma > 0.0 && dist.gamma < 1.0))
    throw ConfigError("sample_distribution: gamma outside (0,1)");
  if (!(dist.r_min > dist.gamma))
    throw ConfigError(
        "sample_distribution: r_min <= gamma makes realizability unverifiable");
  if (!(dist.positive_weight >= 0.0 && dist.positive_weight <= 1.0))
    throw ConfigError("sample_distribution: class weight outside [0,1]");
  const int d = dist.family.dim;

  std::mt19937_64 rng(dist.seed);
  Sample sample;
  sample.seed = dist.seed;
  sample.dist_id = dist.family.kind_name() + "-realizable";
  sample.xs.reserve(static_cast<std::size_t>(n));
  sample.ys.reserve(static_cast<std::size_t>(n));

  std::vector<double> x(static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) {
    const int side = uniform01(rng) < dist.positive_weight ? +1 : -1;
    for (;;) {
      double norm_sq = 0.0;
      for (double& v : x) {
        v = 2.0 * uniform01(rng) - 1.0;
        norm_sq += v * v;
      }
      if (norm_sq > 1.0) continue;
      if (side * eval_hypothesis(dist.f_star, x) < dist.r_min) continue;
      break;
    }
    if (!(signed_lower_margin(dist.f_star, side, x, dist.gamma) > 0.0))
      throw ConfigError(
          "sample_distribution: drawn point violates the realizability "
          "invariant for f*");
    sample.xs.push_back(x);
    sample.ys.push_back(side);
  }
  return sample;
}

double empirical_risk(const Surrogate& surrogate, const HypothesisPoint& h,
                      const Sample& sample, double gamma,
                      const BallGridSpec& oracle) {
  if (sample.xs.empty()) throw DomainError("empirical_risk: empty sample");
  double total = 0.0;
  for (std::size_t i = 0; i < sample.xs.size(); ++i) {
    const auto& x = sample.xs[i];
    const int y = sample.ys[i];
    switch (surrogate.form) {
      case LossForm::plain:
        total += surrogate.loss(y * eval_hypothesis(h, x));
        break;
      case LossForm::sup_based:
        total += sup_loss_value(surrogate.loss,
                                adversarial_margins(h, x, gamma, oracle), y);
        break;
      case LossForm::adv01: {
        const MarginPair m = adversarial_margins(h, x, gamma, oracle);
        const bool err = y == 1 ? m.lower <= 0.0 : m.upper >= 0.0;
        total += err ? 1.0 : 0.0;
        break;
      }
    }
  }
  return total / static_cast<double>(sample.xs.size());
}

namespace {

struct Incumbent {
  HypothesisPoint h;
  double risk = 0.0;
};

HypothesisPoint linear_at_angle(const HypothesisFamily& fam, double theta) {
  return HypothesisPoint::linear(fam, {std::cos(theta), std::sin(theta)});
}

HypothesisPoint glm_at(const HypothesisFamily& fam, double theta, double b) {
  return HypothesisPoint::glm(fam, {std::cos(theta), std::sin(theta)}, b);
}

}  // namespace

std::pair<HypothesisPoint, TrainTrace> minimize_surrogate(
    const Surrogate& surrogate, const HypothesisFamily& family,
    const Sample& sample, double gamma, OptimizerKind optimizer,
    const ParamGridSpec& params) {
  if (sample.xs.empty()) throw DomainError("minimize_surrogate: empty sample");

  std::vector<std::pair<int, Incumbent>> improvements;
  const auto hyps = param_grid(family, params);
  Incumbent best{hyps.front(),
                 empirical_risk(surrogate, hyps.front(), sample, gamma)};
  improvements.push_back({0, best});
  for (std::size_t i = 1; i < hyps.size(); ++i) {
    const double r = empirical_risk(surrogate, hyps[i], sample, gamma);
    if (r < best.risk) {
      best = {hyps[i], r};
      improvements.push_back({static_cast<int>(i), best});
    }
  }

  if (optimizer == OptimizerKind::coordinate_refine) {
    const bool is_linear = family.kind == FamilyKind::linear && family.dim == 2;
    const bool is_glm = (family.kind == FamilyKind::glm ||
                         family.kind == FamilyKind::relu_glm) &&
                        family.dim == 2;
    if (!is_linear && !is_glm)
      throw ConfigError(
          "minimize_surrogate: coordinate-refine supports linear/glm in d = 2");
    double theta = std::atan2(best.h.w[1], best.h.w[0]);
    double b = is_glm ? best.h.b : 0.0;
    double step_theta = std::numbers::pi / 180.0;  // 1 degree
    double step_b = is_glm && params.biases > 1
                        ? 2.0 * family.bias_bound / (params.biases - 1)
                        : 0.0;
    const int next_iter = improvements.back().first + 1;
    for (int round = 0; round < 12; ++round) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (double cand_theta : {theta - step_theta, theta + step_theta}) {
          const HypothesisPoint h = is_glm ? glm_at(family, cand_theta, b)
                                           : linear_at_angle(family, cand_theta);
          const double r = empirical_risk(surrogate, h, sample, gamma);
          if (r < best.risk) {
            best = {h, r};
            theta = cand_theta;
            improved = true;
          }
        }
        if (is_glm && step_b > 0.0) {
          for (double cand_b :
               {std::max(-family.bias_bound, b - step_b),
                std::min(family.bias_bound, b + step_b)}) {
            const HypothesisPoint h = glm_at(family, theta, cand_b);
            const double r = empirical_risk(surrogate, h, sample, gamma);
            if (r < best.risk) {
              best = {h, r};
              b = cand_b;
              improved = true;
            }
          }
        }
      }
      improvements.push_back({next_iter + round, best});
      step_theta *= 0.5;
      step_b *= 0.5;
    }
  }

  TrainTrace trace;
  trace.minimal_risk = best.risk;
  trace.entries.reserve(improvements.size());
  for (const auto& [iter, inc] : improvements) {
    TraceEntry e;
    e.iteration = iter;
    e.surrogate_risk = inc.risk;
    e.gap = inc.risk - best.risk;
    e.adv_risk = empirical_risk(Surrogate::adversarial01(), inc.h, sample, gamma);
    trace.entries.push_back(e);
  }
  return {best.h, std::move(trace)};
}

ExperimentReport consistency_experiment(const ExperimentConfig& config) {
  if (config.n_train < 1 || config.n_heldout < 1)
    throw ConfigError("consistency_experiment: sample sizes must be >= 1");
  if (config.distribution.gamma != config.gamma)
    throw ConfigError("consistency_experiment: distribution gamma mismatch");

  ExperimentReport report;
  report.surrogate_name = surrogate_name(config.surrogate);
  report.family_name = config.family.kind_name();
  report.gamma = config.gamma;
  report.seed = config.distribution.seed;
  report.n_train = config.n_train;
  report.n_heldout = config.n_heldout;

  // Calibration precondition via the matching checker.
  if (config.surrogate.form == LossForm::sup_based &&
      config.surrogate.loss.kind() == LossKind::rho_margin &&
      config.family.symmetric()) {
    report.calibrated_surrogate = true;
    report.checker_note = "sup ramp loss on a symmetric family (unconditional)";
  } else if (config.surrogate.form == LossForm::plain &&
             config.family.kind == FamilyKind::linear) {
    const TheoremVerdict v = check_qce_linear(config.surrogate.loss, config.gamma);
    report.calibrated_surrogate =
        v.predicted == Predicted::calibrated && !v.discrepancy;
    report.checker_note =
        v.discrepancy ? "fixed-gamma condition flagged a threshold discrepancy"
                      : "plain-loss linear condition: " + predicted_name(v.predicted);
  } else if (config.surrogate.form == LossForm::plain &&
             (config.family.kind == FamilyKind::glm ||
              config.family.kind == FamilyKind::relu_glm)) {
    const TheoremVerdict v =
        check_qce_glm(config.surrogate.loss, config.family.link,
                      config.family.bias_bound, config.gamma);
    report.calibrated_surrogate = v.predicted == Predicted::calibrated;
    report.checker_note = "glm condition: " + predicted_name(v.predicted);
  } else {
    report.calibrated_surrogate = false;
    report.checker_note = "no checker certifies this surrogate; trace only";
  }

  const Sample train = sample_distribution(config.distribution, config.n_train);
  SyntheticDistribution heldout_dist = config.distribution;
  heldout_dist.seed = config.distribution.seed ^ 0x9E3779B97F4A7C15ull;
  const Sample heldout = sample_distribution(heldout_dist, config.n_heldout);

  auto [h, trace] = minimize_surrogate(config.surrogate, config.family, train,
                                       config.gamma, config.optimizer,
                                       config.params);
  report.trace = std::move(trace);

  // Monotone pairing: for each gap threshold, the worst adversarial risk
  // among trace hypotheses that already reached that gap.
  std::vector<double> thresholds;
  for (const auto& e : report.trace.entries) thresholds.push_back(e.gap);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  for (double th : thresholds) {
    double worst = 0.0;
    for (const auto& e : report.trace.entries)
      if (e.gap <= th) worst = std::max(worst, e.adv_risk);
    report.pairing.push_back({th, worst});
  }

  report.final_train_adv_risk =
      empirical_risk(Surrogate::adversarial01(), h, train, config.gamma);
  report.heldout_adv_risk =
      empirical_risk(Surrogate::adversarial01(), h, heldout, config.gamma);
  report.asserted = report.calibrated_surrogate;
  report.assertion_passed = report.asserted && report.heldout_adv_risk == 0.0;
  return report;
}

}  // namespace advcal
