#include "advcal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "advcal/errors.hpp"
#include "advcal/parallel.hpp"

namespace advcal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Constraint-set shape selected by (epsilon, eta). Case boundaries follow
// the piecewise formula literally: epsilon <= |2 eta - 1| selects the
// one-sided set, epsilon > max{eta, 1-eta} empties the set.
enum class Branch { empty, straddle, lower_nonpos, upper_nonneg };

Branch select_branch(double epsilon, double eta) {
  const double top = std::max(eta, 1.0 - eta);
  const double gap = std::abs(2.0 * eta - 1.0);
  if (epsilon > top) return Branch::empty;
  if (epsilon <= gap) return eta > 0.5 ? Branch::lower_nonpos : Branch::upper_nonneg;
  return Branch::straddle;
}

bool margins_satisfy(Branch br, const MarginPair& m) {
  switch (br) {
    case Branch::straddle:
      return m.lower <= 0.0 && 0.0 <= m.upper;
    case Branch::lower_nonpos:
      return m.lower <= 0.0;
    case Branch::upper_nonneg:
      return m.upper >= 0.0;
    case Branch::empty:
      return false;
  }
  return false;
}

void validate_query(const CalibrationQuery& q) {
  if (!(q.epsilon > 0.0)) throw DomainError("delta_max: epsilon must be > 0");
  if (!(q.eta >= 0.0 && q.eta <= 1.0)) throw DomainError("delta_max: eta outside [0,1]");
  if (!(q.gamma > 0.0 && q.gamma < 1.0))
    throw DomainError("delta_max: gamma outside (0,1)");
  if (static_cast<int>(q.x.size()) != q.family.dim)
    throw DomainError("delta_max: x dimension mismatch");
}

double surrogate_risk_from(const Surrogate& s, const MarginPair& m, double value,
                           double eta) {
  switch (s.form) {
    case LossForm::plain:
      return cbar(s.loss, value, eta);
    case LossForm::sup_based:
      return eta * sup_loss_value(s.loss, m, +1) +
             (1.0 - eta) * sup_loss_value(s.loss, m, -1);
    case LossForm::adv01:
      return adv01_inner_risk(m, eta);
  }
  throw DomainError("surrogate_risk_from: unknown loss form");
}

bool piecewise_linear(const MarginLoss& loss) {
  switch (loss.kind()) {
    case LossKind::rho_margin:
    case LossKind::hinge:
    case LossKind::zero_one:
    case LossKind::custom_table:
      return true;
    case LossKind::logistic:
    case LossKind::exponential:
      return false;
  }
  return false;
}

// Infimum over t in [l, u] of the sup-form objective
// eta*phi(t - gamma) + (1 - eta)*phi(-t - gamma), with loss kinks merged in
// so piecewise-linear losses are evaluated exactly.
IntervalInf sup_objective_interval_inf(const MarginLoss& loss, double l, double u,
                                       double eta, double gamma, int points) {
  if (l > u) throw DomainError("sup objective: l > u");
  auto objective = [&](double t) {
    return eta * loss(t - gamma) + (1.0 - eta) * loss(-t - gamma);
  };
  if (l == u) return {objective(l), l, true};
  std::vector<double> extra = {0.0, gamma, -gamma};
  for (double bp : loss.breakpoints()) {
    extra.push_back(gamma + bp);
    extra.push_back(-gamma - bp);
  }
  const auto grid = grid_with_points(l, u, points, extra);
  const ScalarMin best = minimize_on_grid(objective, grid);
  return {best.value, best.arg, piecewise_linear(loss)};
}

IntervalInf plain_interval_inf(const MarginLoss& loss, double l, double u,
                               double eta, int points) {
  return cbar_interval_inf_full(loss, l, u, eta, points);
}

// Unit vector w with w . x = t, used to lift interval argmins back to
// hypotheses (d >= 2).
std::vector<double> direction_with_value(std::span<const double> x, double t) {
  const double r = norm2(x);
  const double c = std::clamp(t / r, -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  std::vector<double> xh(x.begin(), x.end());
  for (double& v : xh) v /= r;
  if (x.size() == 2) return {c * xh[0] - s * xh[1], c * xh[1] + s * xh[0]};
  // Orthogonal complement direction: unit vector v with v . xh = 0.
  std::size_t k = 0;
  for (std::size_t i = 1; i < xh.size(); ++i)
    if (std::abs(xh[i]) < std::abs(xh[k])) k = i;
  std::vector<double> v(xh.size(), 0.0);
  v[k] = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= xh[k] * xh[i];
  const double vn = norm2(v);
  for (double& e : v) e /= vn;
  std::vector<double> w(xh.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = c * xh[i] + s * v[i];
  return w;
}

struct ABoundsFull {
  double upper = 0.0, upper_arg = 0.0;
  double lower = 0.0, lower_arg = 0.0;
};

ABoundsFull a_bounds_args(const MonotoneFn& g, double t, double gamma,
                          int s_points) {
  if (g.kind() == LinkKind::identity) return {gamma, t, -gamma, 0.0};
  if (g.kind() == LinkKind::relu) return {std::min(t, gamma), t, -gamma, 0.0};
  std::vector<double> extra;
  for (double bp : g.breakpoints()) {
    extra.push_back(bp);
    extra.push_back(bp + gamma);
    extra.push_back(bp - gamma);
  }
  const auto ss = grid_with_points(-t, t, s_points, extra);
  ABoundsFull out{-kInf, 0.0, kInf, 0.0};
  for (double s : ss) {
    const double up = g(s) - g(s - gamma);
    if (up > out.upper) out.upper = up, out.upper_arg = s;
    const double lo = g(s) - g(s + gamma);
    if (lo < out.lower) out.lower = lo, out.lower_arg = s;
  }
  return out;
}

}  // namespace

std::string method_name(DeltaMethod m) {
  switch (m) {
    case DeltaMethod::brute:
      return "brute";
    case DeltaMethod::symmetric_reduction:
      return "symmetric_reduction";
    case DeltaMethod::glm_reduction:
      return "glm_reduction";
  }
  return "?";
}

std::string surrogate_name(const Surrogate& s) {
  switch (s.form) {
    case LossForm::plain:
      return "plain " + s.loss.name();
    case LossForm::sup_based:
      return "sup " + s.loss.name();
    case LossForm::adv01:
      return "adversarial 0/1";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

GridEvaluation evaluate_param_grid(const HypothesisFamily& family,
                                   std::span<const double> x, double gamma,
                                   const GridSpecs& grids) {
  GridEvaluation eval;
  eval.hypotheses = param_grid(family, grids.params);
  const std::size_t n = eval.hypotheses.size();
  if (n == 0) throw ConfigError("evaluate_param_grid: empty parameter grid");
  eval.margins.resize(n);
  eval.values.resize(n);
  std::vector<double> xv(x.begin(), x.end());
  parallel_for(n, [&](std::size_t i) {
    eval.margins[i] =
        adversarial_margins(eval.hypotheses[i], xv, gamma, grids.oracle);
    eval.values[i] = eval_hypothesis(eval.hypotheses[i], xv);
  });
  return eval;
}

CalibrationValue delta_max_bruteforce(const CalibrationQuery& q,
                                      const GridEvaluation& eval) {
  validate_query(q);
  const std::size_t n = eval.hypotheses.size();

  double adv_min = kInf, sur_min = kInf;
  std::vector<double> adv(n), sur(n);
  for (std::size_t i = 0; i < n; ++i) {
    adv[i] = adv01_inner_risk(eval.margins[i], q.eta);
    sur[i] = surrogate_risk_from(q.surrogate, eval.margins[i], eval.values[i], q.eta);
    adv_min = std::min(adv_min, adv[i]);
    sur_min = std::min(sur_min, sur[i]);
  }

  CalibrationValue out;
  out.method = DeltaMethod::brute;
  double best = kInf;
  std::size_t best_i = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (adv[i] - adv_min < q.epsilon) continue;
    const double excess = sur[i] - sur_min;
    if (excess < best) best = excess, best_i = i;
  }
  if (best_i == n) return out;  // infinite
  out.infinite = false;
  out.value = best;
  out.witness = eval.hypotheses[best_i];
  return out;
}

CalibrationValue delta_max_bruteforce(const CalibrationQuery& q) {
  validate_query(q);
  return delta_max_bruteforce(
      q, evaluate_param_grid(q.family, q.x, q.gamma, q.grids));
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

namespace {

CalibrationValue reduce_linear(const CalibrationQuery& q) {
  const double r = norm2(q.x);
  CalibrationValue out;
  out.method = DeltaMethod::symmetric_reduction;
  if (r <= q.gamma) return out;  // X1: constraint set empty for every branch
  const Branch br = select_branch(q.epsilon, q.eta);
  if (br == Branch::empty) return out;

  const bool sup = q.surrogate.form != LossForm::plain;
  auto inf_on = [&](double l, double u) {
    return sup ? sup_objective_interval_inf(q.surrogate.loss, l, u, q.eta, q.gamma,
                                            q.grids.interval_points)
               : plain_interval_inf(q.surrogate.loss, l, u, q.eta,
                                    q.grids.interval_points);
  };

  double cl = -q.gamma, cu = q.gamma;
  if (br == Branch::lower_nonpos) cl = -r, cu = q.gamma;
  if (br == Branch::upper_nonneg) cl = -q.gamma, cu = r;

  IntervalInf constrained, unconstrained;
  double witness_t = 0.0;
  if (q.family.dim == 1) {
    // Values of w . x form the two-point set {-r, r}; apply the constraint
    // predicate pointwise.
    auto objective = [&](double t) {
      if (sup)
        return q.eta * q.surrogate.loss(t - q.gamma) +
               (1.0 - q.eta) * q.surrogate.loss(-t - q.gamma);
      return cbar(q.surrogate.loss, t, q.eta);
    };
    double cbest = kInf, ubest = kInf;
    for (double t : {-r, r}) {
      const double v = objective(t);
      ubest = std::min(ubest, v);
      if (t >= cl && t <= cu && v < cbest) cbest = v, witness_t = t;
    }
    if (cbest == kInf) return out;
    constrained = {cbest, witness_t, true};
    unconstrained = {ubest, 0.0, true};
  } else {
    constrained = inf_on(cl, cu);
    unconstrained = inf_on(-r, r);
    witness_t = constrained.arg;
  }

  out.infinite = false;
  out.value = std::max(0.0, constrained.value - unconstrained.value);
  if (q.family.dim == 1) {
    // w . x = witness_t with witness_t in {-r, r}: the sign of w follows x.
    const double w0 = (q.x[0] * witness_t >= 0.0) ? 1.0 : -1.0;
    out.witness = HypothesisPoint::linear(q.family, {w0});
  } else {
    out.witness = HypothesisPoint::linear(q.family, direction_with_value(q.x, witness_t));
  }
  return out;
}

CalibrationValue reduce_all_measurable(const CalibrationQuery& q) {
  const double R = q.family.value_bound;
  CalibrationValue out;
  out.method = DeltaMethod::symmetric_reduction;
  const Branch br = select_branch(q.epsilon, q.eta);
  if (br == Branch::empty) return out;  // every x is in X2 for this family

  const MarginLoss& phi = q.surrogate.loss;
  const int pts = q.grids.interval_points;
  auto pair_witness = [&](double lo, double hi) {
    return HypothesisPoint::all_measurable(q.family, lo, hi);
  };

  double constrained = 0.0, unconstrained = 0.0;
  HypothesisPoint witness = pair_witness(0.0, 0.0);
  if (q.surrogate.form == LossForm::plain) {
    // Plain losses see only the lower value a; margins only constrain a's
    // admissible range.
    const IntervalInf full = plain_interval_inf(phi, -R, R, q.eta, pts);
    IntervalInf c;
    switch (br) {
      case Branch::straddle:
      case Branch::lower_nonpos:
        c = plain_interval_inf(phi, -R, 0.0, q.eta, pts);
        witness = pair_witness(c.arg, std::max(0.0, c.arg));
        break;
      case Branch::upper_nonneg:
        c = full;
        witness = pair_witness(c.arg, std::max(0.0, c.arg));
        break;
      case Branch::empty:
        return out;
    }
    constrained = c.value;
    unconstrained = full.value;
  } else {
    // Sup form: on {a <= b} both terms improve by moving the pair onto the
    // diagonal, so every infimum is a 1-D cbar infimum; the straddle set is
    // separable with optimum (0, 0).
    const IntervalInf full = plain_interval_inf(phi, -R, R, q.eta, pts);
    IntervalInf c;
    switch (br) {
      case Branch::straddle:
        constrained = phi(0.0);
        witness = pair_witness(0.0, 0.0);
        unconstrained = full.value;
        out.infinite = false;
        out.value = std::max(0.0, constrained - unconstrained);
        out.witness = witness;
        return out;
      case Branch::lower_nonpos:
        c = plain_interval_inf(phi, -R, 0.0, q.eta, pts);
        witness = pair_witness(c.arg, c.arg);
        break;
      case Branch::upper_nonneg:
        c = plain_interval_inf(phi, 0.0, R, q.eta, pts);
        witness = pair_witness(c.arg, c.arg);
        break;
      case Branch::empty:
        return out;
    }
    constrained = c.value;
    unconstrained = full.value;
  }

  out.infinite = false;
  out.value = std::max(0.0, constrained - unconstrained);
  out.witness = witness;
  return out;
}

// Reachable value intervals for the glm branches (for |x| = r):
//   unconstrained            [g(-r) - G, g(r) + G]
//   straddle                 [A_lower(r), A_upper(r)]
//   lower margin <= 0        [g(-r) - G, A_upper(r)]
//   upper margin >= 0        [A_lower(r), g(r) + G]
CalibrationValue reduce_glm(const CalibrationQuery& q) {
  const HypothesisFamily& fam = q.family;
  const MonotoneFn& g = fam.link;
  const double G = fam.bias_bound;
  CalibrationValue out;
  out.method = DeltaMethod::glm_reduction;
  if (fam.dim < 2)
    throw UnsupportedReductionError(
        "glm reduction needs d >= 2 (w . x must span an interval)");
  if (!(g(-q.gamma) + G > 0.0 && g(q.gamma) - G < 0.0))
    throw UnsupportedReductionError(
        "glm link violates the normalization g(-gamma)+G > 0, g(gamma)-G < 0");

  const Branch br = select_branch(q.epsilon, q.eta);
  if (br == Branch::empty) return out;

  const double r = norm2(q.x);
  const ABoundsFull ab = a_bounds_args(g, r, q.gamma, 2001);
  const double vlo = g(-r) - G, vhi = g(r) + G;

  double cl = ab.lower, cu = ab.upper;
  if (br == Branch::lower_nonpos) cl = vlo, cu = ab.upper;
  if (br == Branch::upper_nonneg) cl = ab.lower, cu = vhi;

  const LossProps& p = q.surrogate.loss.props();
  const bool endpoint_ok = q.surrogate.form == LossForm::plain &&
                           p.quasi_concave_even && p.continuous && p.bounded &&
                           p.non_increasing;

  // Map a value endpoint back to a (w, b) witness on the constraint set.
  auto witness_for_value = [&](double v) -> std::optional<HypothesisPoint> {
    double s = 0.0, b = 0.0;
    if (v == vhi) {
      s = r;
      b = G;
    } else if (v == vlo) {
      s = -r;
      b = -G;
    } else if (v == ab.upper) {
      s = ab.upper_arg;
      b = -g(s - q.gamma);
    } else if (v == ab.lower) {
      s = ab.lower_arg;
      b = -g(s + q.gamma);
    } else {
      return std::nullopt;
    }
    if (std::abs(b) > G + 1e-12) return std::nullopt;
    return HypothesisPoint::glm(fam, direction_with_value(q.x, s),
                                std::clamp(b, -G, G));
  };

  if (endpoint_ok) {
    const IntervalInf c = plain_interval_inf(q.surrogate.loss, cl, cu, q.eta,
                                             q.grids.interval_points);
    const IntervalInf full = plain_interval_inf(q.surrogate.loss, vlo, vhi, q.eta,
                                                q.grids.interval_points);
    auto w = witness_for_value(c.arg);
    if (w) {
      out.infinite = false;
      out.value = std::max(0.0, c.value - full.value);
      out.witness = std::move(w);
      return out;
    }
    // fall through to the (s, b) grid when the analytic witness is infeasible
  }

  // Constrained dense minimization over (s, b). Special biases per s make
  // the convex-loss witness construction land on the grid exactly.
  std::vector<double> s_extra = {0.0, ab.upper_arg, ab.lower_arg};
  for (double bp : g.breakpoints()) {
    s_extra.push_back(bp);
    s_extra.push_back(bp + q.gamma);
    s_extra.push_back(bp - q.gamma);
  }
  const auto s_grid = grid_with_points(-r, r, 201, s_extra);
  const auto b_base = G > 0.0 ? linspace(-G, G, 201) : std::vector<double>{0.0};

  auto objective = [&](double s, double b) {
    if (q.surrogate.form == LossForm::plain) return cbar(q.surrogate.loss, g(s) + b, q.eta);
    return q.eta * q.surrogate.loss(g(s - q.gamma) + b) +
           (1.0 - q.eta) * q.surrogate.loss(-g(s + q.gamma) - b);
  };
  auto satisfies = [&](double s, double b) {
    const double lo = g(s - q.gamma) + b, hi = g(s + q.gamma) + b;
    switch (br) {
      case Branch::straddle:
        return lo <= 0.0 && 0.0 <= hi;
      case Branch::lower_nonpos:
        return lo <= 0.0;
      case Branch::upper_nonneg:
        return hi >= 0.0;
      case Branch::empty:
        return false;
    }
    return false;
  };

  double cbest = kInf, ubest = kInf;
  double ws = 0.0, wb = 0.0;
  for (double s : s_grid) {
    std::vector<double> bs = b_base;
    for (double sp : {-g(s - q.gamma), -g(s + q.gamma),
                      -0.5 * (g(s - q.gamma) + g(s + q.gamma))})
      if (sp >= -G && sp <= G) bs.push_back(sp);
    for (double b : bs) {
      const double v = objective(s, b);
      ubest = std::min(ubest, v);
      if (satisfies(s, b) && v < cbest) cbest = v, ws = s, wb = b;
    }
  }
  if (cbest == kInf) return out;
  out.infinite = false;
  out.value = std::max(0.0, cbest - ubest);
  out.witness = HypothesisPoint::glm(fam, direction_with_value(q.x, ws), wb);
  return out;
}

// Symmetric-branch logic with the constrained infima approximated by
// enumeration over the parameter grid (the only evaluation path for
// one-layer networks, whose margins come from the ball-grid oracle).
CalibrationValue reduce_enumerated(const CalibrationQuery& q,
                                   const GridEvaluation& eval) {
  CalibrationValue out;
  out.method = DeltaMethod::symmetric_reduction;
  bool x2 = false;
  for (const auto& m : eval.margins)
    if (m.lower > 0.0) {
      x2 = true;
      break;
    }
  if (!x2) return out;  // X1
  const Branch br = select_branch(q.epsilon, q.eta);
  if (br == Branch::empty) return out;

  double cbest = kInf, ubest = kInf;
  std::size_t best_i = eval.hypotheses.size();
  for (std::size_t i = 0; i < eval.hypotheses.size(); ++i) {
    const double v =
        surrogate_risk_from(q.surrogate, eval.margins[i], eval.values[i], q.eta);
    ubest = std::min(ubest, v);
    if (margins_satisfy(br, eval.margins[i]) && v < cbest) cbest = v, best_i = i;
  }
  if (best_i == eval.hypotheses.size()) return out;
  out.infinite = false;
  out.value = std::max(0.0, cbest - ubest);
  out.witness = eval.hypotheses[best_i];
  return out;
}

CalibrationValue delta_max_reduced_impl(const CalibrationQuery& q,
                                        const GridEvaluation* cache) {
  validate_query(q);
  if (q.surrogate.form == LossForm::sup_based &&
      !q.surrogate.loss.props().non_increasing)
    throw UnsupportedReductionError(
        "sup-based reduction requires a non-increasing loss");
  switch (q.family.kind) {
    case FamilyKind::linear:
      return reduce_linear(q);
    case FamilyKind::all_measurable:
      return reduce_all_measurable(q);
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      return reduce_glm(q);
    case FamilyKind::one_layer_nn: {
      if (cache) return reduce_enumerated(q, *cache);
      const GridEvaluation eval = evaluate_param_grid(q.family, q.x, q.gamma, q.grids);
      return reduce_enumerated(q, eval);
    }
  }
  throw UnsupportedFamilyError("delta_max_reduced: unknown family");
}

}  // namespace

CalibrationValue delta_max_reduced(const CalibrationQuery& q) {
  return delta_max_reduced_impl(q, nullptr);
}

// ---------------------------------------------------------------------------
// Uniform diagnostic and verdict grids
// ---------------------------------------------------------------------------

VerdictGrid default_verdict_grid(double gamma) {
  VerdictGrid g;
  g.x_norms.reserve(11);
  for (int i = 1; i <= 11; ++i)
    g.x_norms.push_back(gamma + i * (1.0 - gamma) / 11.0);
  g.etas = linspace(0.0, 1.0, 21);
  return g;
}

namespace {

std::vector<double> axis_point(const HypothesisFamily& family, double r) {
  std::vector<double> x(static_cast<std::size_t>(family.dim), 0.0);
  x[0] = r;
  return x;
}

// Evaluate delta_max over a verdict grid, reducing analytically when the
// family supports it and enumerating (with a shared margin cache per x)
// otherwise.
std::vector<DeltaCell> sweep_grid(const Surrogate& surrogate,
                                  const HypothesisFamily& family, double gamma,
                                  const GridSpecs& grids, const VerdictGrid& vg) {
  const bool enumerated = family.kind == FamilyKind::one_layer_nn;
  std::vector<DeltaCell> cells(vg.epsilons.size() * vg.x_norms.size() *
                               vg.etas.size());
  std::size_t base = 0;
  for (double r : vg.x_norms) {
    const std::vector<double> x = axis_point(family, r);
    GridEvaluation cache;
    if (enumerated) cache = evaluate_param_grid(family, x, gamma, grids);
    const std::size_t per_x = vg.epsilons.size() * vg.etas.size();
    parallel_for(per_x, [&](std::size_t k) {
      const double eps = vg.epsilons[k / vg.etas.size()];
      const double eta = vg.etas[k % vg.etas.size()];
      CalibrationQuery q{surrogate, family, gamma, eps, x, eta, grids};
      DeltaCell cell{eps, r, eta, {}};
      cell.value = delta_max_reduced_impl(q, enumerated ? &cache : nullptr);
      cells[base + k] = std::move(cell);
    });
    base += per_x;
  }
  return cells;
}

}  // namespace

UniformDeltaResult uniform_delta(const Surrogate& surrogate,
                                 const HypothesisFamily& family, double gamma,
                                 double epsilon, const GridSpecs& grids) {
  if (!(epsilon > 0.0)) throw DomainError("uniform_delta: epsilon must be > 0");
  VerdictGrid vg = default_verdict_grid(gamma);
  vg.epsilons = {epsilon};
  const auto cells = sweep_grid(surrogate, family, gamma, grids, vg);
  UniformDeltaResult out;
  for (const auto& c : cells) {
    if (c.value.infinite) continue;
    if (out.infinite || c.value.value < out.value) {
      out.infinite = false;
      out.value = c.value.value;
      out.at_x_norm = c.x_norm;
      out.at_eta = c.eta;
    }
  }
  return out;
}

VerdictReport calibration_verdict(const Surrogate& surrogate,
                                  const HypothesisFamily& family, double gamma,
                                  const GridSpecs& grids, double tol,
                                  std::optional<VerdictGrid> grid) {
  if (!(tol > 0.0)) throw DomainError("calibration_verdict: tol must be > 0");
  const VerdictGrid vg = grid ? *grid : default_verdict_grid(gamma);
  VerdictReport report;
  report.tol = tol;
  report.gamma = gamma;
  report.surrogate_name = surrogate_name(surrogate);
  report.family_name = family.kind_name();
  report.method = family.kind == FamilyKind::one_layer_nn
                      ? "symmetric_reduction(enumerated)"
                      : method_name(family.kind == FamilyKind::glm ||
                                            family.kind == FamilyKind::relu_glm
                                        ? DeltaMethod::glm_reduction
                                        : DeltaMethod::symmetric_reduction);
  report.cells = sweep_grid(surrogate, family, gamma, grids, vg);
  for (const auto& c : report.cells) {
    if (c.value.infinite) {
      ++report.infinite_count;
      continue;
    }
    ++report.finite_count;
    if (!report.has_finite || c.value.value < report.min_finite_delta) {
      report.has_finite = true;
      report.min_finite_delta = c.value.value;
      report.at_epsilon = c.epsilon;
      report.at_x_norm = c.x_norm;
      report.at_eta = c.eta;
      report.witness = c.value.witness;
    }
  }
  report.verdict = (report.has_finite && report.min_finite_delta <= tol)
                       ? "calibration-violated"
                       : "consistent-with-calibration";
  return report;
}

}  // namespace advcal
