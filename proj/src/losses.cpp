#include "advcal/losses.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "advcal/errors.hpp"

namespace advcal {

namespace {

constexpr double kIdentityTol = 1e-12;  // algebraic identities
constexpr double kMonotoneTol = 1e-9;   // monotonicity slack

double softplus(double z) {
  // log(1 + exp(z)) without overflow.
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double table_eval(const std::vector<std::pair<double, double>>& table, double t) {
  if (t <= table.front().first) return table.front().second;
  if (t >= table.back().first) return table.back().second;
  auto it = std::upper_bound(
      table.begin(), table.end(), t,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

}  // namespace

MarginLoss MarginLoss::zero_one() {
  MarginLoss phi;
  phi.kind_ = LossKind::zero_one;
  phi.name_ = "zero_one";
  phi.props_ = {.convex = false,
                .non_increasing = true,
                .bounded = true,
                .continuous = false,
                .quasi_concave_even = true};
  phi.breakpoints_ = {0.0};
  return phi;
}

MarginLoss MarginLoss::rho_margin(double rho) {
  if (!(rho > 0.0)) throw InvalidLossError("rho_margin: rho must be > 0");
  MarginLoss phi;
  phi.kind_ = LossKind::rho_margin;
  phi.rho_ = rho;
  phi.name_ = "rho_margin(" + std::to_string(rho) + ")";
  phi.props_ = {.convex = false,
                .non_increasing = true,
                .bounded = true,
                .continuous = true,
                .quasi_concave_even = true};
  phi.breakpoints_ = {0.0, rho};
  return phi;
}

MarginLoss MarginLoss::hinge() {
  MarginLoss phi;
  phi.kind_ = LossKind::hinge;
  phi.name_ = "hinge";
  phi.props_ = {.convex = true,
                .non_increasing = true,
                .bounded = false,
                .continuous = true,
                .quasi_concave_even = false};
  phi.breakpoints_ = {1.0};
  return phi;
}

MarginLoss MarginLoss::logistic() {
  MarginLoss phi;
  phi.kind_ = LossKind::logistic;
  phi.name_ = "logistic";
  phi.props_ = {.convex = true,
                .non_increasing = true,
                .bounded = false,
                .continuous = true,
                .quasi_concave_even = false};
  return phi;
}

MarginLoss MarginLoss::exponential() {
  MarginLoss phi;
  phi.kind_ = LossKind::exponential;
  phi.name_ = "exponential";
  phi.props_ = {.convex = true,
                .non_increasing = true,
                .bounded = false,
                .continuous = true,
                .quasi_concave_even = false};
  return phi;
}

MarginLoss MarginLoss::custom_table(std::vector<std::pair<double, double>> points,
                                    LossProps declared) {
  if (points.size() < 2) throw InvalidLossError("custom_table: need >= 2 points");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first == points[i - 1].first)
      throw InvalidLossError("custom_table: duplicate t value");
  for (const auto& [t, v] : points)
    if (!(v >= 0.0)) throw InvalidLossError("custom_table: loss values must be >= 0");
  MarginLoss phi;
  phi.kind_ = LossKind::custom_table;
  phi.table_ = std::move(points);
  phi.name_ = "custom_table";
  phi.props_ = declared;
  for (const auto& [t, v] : phi.table_) phi.breakpoints_.push_back(t);
  const PropertyReport report = verify_loss_properties(phi);
  if (!report.declared_consistent(declared))
    throw InvalidLossError("custom_table: a declared property fails its verifier");
  return phi;
}

double MarginLoss::operator()(double t) const {
  switch (kind_) {
    case LossKind::zero_one:
      return t <= 0.0 ? 1.0 : 0.0;
    case LossKind::rho_margin:
      return std::min(1.0, std::max(0.0, 1.0 - t / rho_));
    case LossKind::hinge:
      return std::max(0.0, 1.0 - t);
    case LossKind::logistic:
      return softplus(-t);
    case LossKind::exponential:
      return std::exp(-t);
    case LossKind::custom_table:
      return table_eval(table_, t);
  }
  throw InvalidLossError("unknown loss kind");
}

double eval_loss(const MarginLoss& loss, double t) { return loss(t); }

double sup_loss_value(const MarginLoss& loss, const MarginPair& margins, int y) {
  if (!loss.props().non_increasing)
    throw UnsupportedReductionError(
        "sup_loss_value: loss not declared non-increasing; the inf-margin "
        "identity is the only evaluation path");
  if (margins.lower > margins.upper)
    throw DomainError("sup_loss_value: lower margin exceeds upper margin");
  if (y != 1 && y != -1) throw DomainError("sup_loss_value: label must be +-1");
  // inf over the ball of y*f is M_lower for y=+1 and -M_upper for y=-1.
  return y == 1 ? loss(margins.lower) : loss(-margins.upper);
}

double cbar(const MarginLoss& loss, double t, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("cbar: eta outside [0,1]");
  return eta * loss(t) + (1.0 - eta) * loss(-t);
}

IntervalInf cbar_interval_inf_full(const MarginLoss& loss, double l, double u,
                                   double eta, int grid_points) {
  if (l > u) throw DomainError("cbar_interval_inf: l > u");
  const LossProps& p = loss.props();
  if (p.quasi_concave_even && p.continuous && p.bounded && p.non_increasing) {
    const double vl = cbar(loss, l, eta);
    const double vu = cbar(loss, u, eta);
    return vl <= vu ? IntervalInf{vl, l, true} : IntervalInf{vu, u, true};
  }
  if (l == u) return {cbar(loss, l, eta), l, true};
  std::vector<double> extra = {0.0};
  for (double bp : loss.breakpoints()) {
    extra.push_back(bp);
    extra.push_back(-bp);
  }
  const auto grid = grid_with_points(l, u, grid_points, extra);
  const ScalarMin best =
      minimize_on_grid([&](double t) { return cbar(loss, t, eta); }, grid);
  return {best.value, best.arg, false};
}

double cbar_interval_inf(const MarginLoss& loss, double l, double u, double eta,
                         int grid_points) {
  return cbar_interval_inf_full(loss, l, u, eta, grid_points).value;
}

const PropertyCheck* PropertyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool PropertyReport::passed(const std::string& name) const {
  const PropertyCheck* c = find(name);
  return c != nullptr && c->pass;
}

bool PropertyReport::declared_consistent(const LossProps& declared) const {
  if (declared.convex && !passed("convex")) return false;
  if (declared.non_increasing && !passed("non_increasing")) return false;
  if (declared.bounded && !passed("bounded_flat_tails")) return false;
  if (declared.quasi_concave_even &&
      !(passed("cbar_unimodal") && passed("cbar_half_even") &&
        passed("cbar_half_non_increasing") && passed("cbar_monotone_eta_high") &&
        passed("cbar_monotone_eta_low") && passed("endpoint_rule")))
    return false;
  return true;
}

namespace {

void record(PropertyReport& report, std::string name, double worst, double at,
            double tol) {
  report.checks.push_back(PropertyCheck{std::move(name), worst <= tol, worst, at});
}

}  // namespace

PropertyReport verify_loss_properties(const MarginLoss& loss, const GridSpec& grid) {
  if (grid.points < 3 || !(grid.lo < grid.hi))
    throw DomainError("verify_loss_properties: invalid grid");
  std::vector<double> extra;
  for (double bp : loss.breakpoints()) {
    extra.push_back(bp);
    extra.push_back(-bp);
  }
  const auto ts = grid_with_points(grid.lo, grid.hi, grid.points, extra);
  std::vector<double> vals(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) vals[i] = loss(ts[i]);

  PropertyReport report;

  {  // nonnegativity (type invariant, re-checked here)
    double worst = 0.0, at = ts.front();
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (-vals[i] > worst) worst = -vals[i], at = ts[i];
    record(report, "non_negative", worst, at, 0.0);
  }

  {  // convexity via midpoint test over all grid pairs
    double worst = 0.0, at = ts.front();
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = i + 2; j < ts.size(); j += 2) {
        const double mid = 0.5 * (ts[i] + ts[j]);
        const double gap = loss(mid) - 0.5 * (vals[i] + vals[j]);
        if (gap > worst) worst = gap, at = mid;
      }
    record(report, "convex", worst, at, kMonotoneTol);
  }

  {  // non-increasing
    double worst = 0.0, at = ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (vals[i] - vals[i - 1] > worst) worst = vals[i] - vals[i - 1], at = ts[i];
    record(report, "non_increasing", worst, at, kMonotoneTol);
  }

  {  // flat tails: bounded losses are constant beyond some radius
    const double h = (grid.hi - grid.lo) / 50.0;
    const double left = std::abs(loss(grid.lo) - loss(grid.lo + h));
    const double right = std::abs(loss(grid.hi) - loss(grid.hi - h));
    const double worst = std::max(left, right);
    record(report, "bounded_flat_tails", worst, worst == left ? grid.lo : grid.hi,
           kMonotoneTol);
  }

  const std::vector<double> eta_high = {0.6, 0.75, 0.9, 1.0};
  const std::vector<double> eta_low = {0.0, 0.1, 0.25, 0.4};

  {  // part 1: cbar(., eta) quasi-concave, i.e. no grid point sits strictly
     // below the max on both of its sides
    double worst = 0.0, at = ts.front();
    std::vector<double> etas = eta_low;
    etas.insert(etas.end(), eta_high.begin(), eta_high.end());
    etas.push_back(0.5);
    std::vector<double> c(ts.size()), lmax(ts.size()), rmax(ts.size());
    for (double eta : etas) {
      for (std::size_t i = 0; i < ts.size(); ++i) c[i] = cbar(loss, ts[i], eta);
      lmax[0] = c[0];
      for (std::size_t i = 1; i < ts.size(); ++i) lmax[i] = std::max(lmax[i - 1], c[i]);
      rmax[ts.size() - 1] = c[ts.size() - 1];
      for (std::size_t i = ts.size() - 1; i-- > 0;) rmax[i] = std::max(rmax[i + 1], c[i]);
      for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        const double dip = std::min(lmax[i - 1], rmax[i + 1]) - c[i];
        if (dip > worst) worst = dip, at = ts[i];
      }
    }
    record(report, "cbar_unimodal", worst, at, kMonotoneTol);
  }

  {  // part 2a: cbar(t, 1/2) = cbar(-t, 1/2) exactly
    double worst = 0.0, at = ts.front();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double diff =
          std::abs(cbar(loss, ts[i], 0.5) - cbar(loss, -ts[i], 0.5));
      if (diff > worst) worst = diff, at = ts[i];
    }
    record(report, "cbar_half_even", worst, at, kIdentityTol);
  }

  {  // part 2b: cbar(., 1/2) non-increasing on t >= 0
    double worst = 0.0, at = ts.front();
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] < 0.0) continue;
      const double c = cbar(loss, ts[i], 0.5);
      if (have_prev && c - prev > worst) worst = c - prev, at = ts[i];
      prev = c;
      have_prev = true;
    }
    record(report, "cbar_half_non_increasing", worst, at, kMonotoneTol);
  }

  {  // part 4: for eta > 1/2, cbar(., eta) non-increasing on t >= 0
    double worst = 0.0, at = ts.front();
    for (double eta : eta_high) {
      double prev = 0.0;
      bool have_prev = false;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < 0.0) continue;
        const double c = cbar(loss, ts[i], eta);
        if (have_prev && c - prev > worst) worst = c - prev, at = ts[i];
        prev = c;
        have_prev = true;
      }
    }
    record(report, "cbar_monotone_eta_high", worst, at, kMonotoneTol);
  }

  {  // part 5: for eta < 1/2, cbar(., eta) non-decreasing on t <= 0
    double worst = 0.0, at = ts.front();
    for (double eta : eta_low) {
      double prev = 0.0;
      bool have_prev = false;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] > 0.0) break;
        const double c = cbar(loss, ts[i], eta);
        if (have_prev && prev - c > worst) worst = prev - c, at = ts[i];
        prev = c;
        have_prev = true;
      }
    }
    record(report, "cbar_monotone_eta_low", worst, at, kMonotoneTol);
  }

  {  // part 3: endpoint rule vs dense-grid infimum on seeded random intervals
    std::mt19937_64 rng(20240811u);
    auto unif = [&rng](double a, double b) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return a + (b - a) * u;
    };
    double worst = 0.0, at = ts.front();
    for (int k = 0; k < 32; ++k) {
      double l = unif(grid.lo, grid.hi);
      double u = unif(grid.lo, grid.hi);
      if (l > u) std::swap(l, u);
      const double eta = unif(0.0, 1.0);
      const double endpoint = std::min(cbar(loss, l, eta), cbar(loss, u, eta));
      const auto dense = grid_with_points(l, u, 2001, extra);
      const double oracle =
          minimize_on_grid([&](double t) { return cbar(loss, t, eta); }, dense)
              .value;
      const double gap = endpoint - oracle;
      if (gap > worst) worst = gap, at = l;
    }
    record(report, "endpoint_rule", worst, at, 1e-6);
  }

  return report;
}

}  // namespace advcal
