#include "advcal/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "advcal/errors.hpp"

namespace advcal {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// MonotoneFn
// ---------------------------------------------------------------------------

MonotoneFn MonotoneFn::identity() {
  MonotoneFn g;
  g.kind_ = LinkKind::identity;
  return g;
}

MonotoneFn MonotoneFn::relu() {
  MonotoneFn g;
  g.kind_ = LinkKind::relu;
  return g;
}

MonotoneFn MonotoneFn::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("monotone table: need >= 2 points");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].first == points[i - 1].first)
      throw DomainError("monotone table: duplicate s value");
    if (points[i].second < points[i - 1].second)
      throw DomainError("monotone table: values must be non-decreasing");
  }
  MonotoneFn g;
  g.kind_ = LinkKind::table;
  g.table_ = std::move(points);
  return g;
}

double MonotoneFn::operator()(double s) const {
  switch (kind_) {
    case LinkKind::identity:
      return s;
    case LinkKind::relu:
      return s > 0.0 ? s : 0.0;
    case LinkKind::table: {
      if (s <= table_.front().first) return table_.front().second;
      if (s >= table_.back().first) return table_.back().second;
      auto it = std::upper_bound(
          table_.begin(), table_.end(), s,
          [](double v, const std::pair<double, double>& p) { return v < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (s - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  throw DomainError("unknown link kind");
}

std::vector<double> MonotoneFn::breakpoints() const {
  switch (kind_) {
    case LinkKind::identity:
      return {};
    case LinkKind::relu:
      return {0.0};
    case LinkKind::table: {
      std::vector<double> out;
      for (const auto& [s, v] : table_) out.push_back(s);
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// HypothesisFamily
// ---------------------------------------------------------------------------

namespace {

void check_dim(int d) {
  if (d < 1) throw DomainError("hypothesis family: dim must be >= 1");
}

}  // namespace

HypothesisFamily HypothesisFamily::linear(int d) {
  check_dim(d);
  HypothesisFamily f;
  f.kind = FamilyKind::linear;
  f.dim = d;
  return f;
}

HypothesisFamily HypothesisFamily::glm(int d, MonotoneFn g, double G) {
  check_dim(d);
  if (!(G >= 0.0)) throw DomainError("glm: bias bound must be >= 0");
  HypothesisFamily f;
  f.kind = FamilyKind::glm;
  f.dim = d;
  f.link = std::move(g);
  f.bias_bound = G;
  return f;
}

HypothesisFamily HypothesisFamily::relu_glm(int d, double G) {
  HypothesisFamily f = glm(d, MonotoneFn::relu(), G);
  f.kind = FamilyKind::relu_glm;
  return f;
}

HypothesisFamily HypothesisFamily::one_layer_nn(int d, int n, double lambda,
                                                double W) {
  check_dim(d);
  if (n < 1) throw DomainError("one_layer_nn: width must be >= 1");
  if (!(lambda > 0.0) || !(W > 0.0))
    throw DomainError("one_layer_nn: bounds must be > 0");
  HypothesisFamily f;
  f.kind = FamilyKind::one_layer_nn;
  f.dim = d;
  f.width = n;
  f.u_l1_bound = lambda;
  f.w_norm_bound = W;
  return f;
}

HypothesisFamily HypothesisFamily::all_measurable(int d, double R) {
  check_dim(d);
  if (!(R > 0.0)) throw DomainError("all_measurable: value bound must be > 0");
  HypothesisFamily f;
  f.kind = FamilyKind::all_measurable;
  f.dim = d;
  f.value_bound = R;
  return f;
}

bool HypothesisFamily::symmetric() const {
  return kind == FamilyKind::linear || kind == FamilyKind::one_layer_nn ||
         kind == FamilyKind::all_measurable;
}

std::string HypothesisFamily::kind_name() const {
  switch (kind) {
    case FamilyKind::linear:
      return "linear";
    case FamilyKind::glm:
      return "glm";
    case FamilyKind::relu_glm:
      return "relu_glm";
    case FamilyKind::one_layer_nn:
      return "one_layer_nn";
    case FamilyKind::all_measurable:
      return "all_measurable";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// HypothesisPoint
// ---------------------------------------------------------------------------

namespace {

std::vector<double> normalized(std::vector<double> w) {
  const double n = norm2(w);
  if (!(n > 0.0)) throw DomainError("hypothesis: zero direction vector");
  for (double& v : w) v /= n;
  return w;
}

}  // namespace

HypothesisPoint HypothesisPoint::linear(const HypothesisFamily& fam,
                                        std::vector<double> w) {
  if (fam.kind != FamilyKind::linear)
    throw DomainError("HypothesisPoint::linear: family mismatch");
  if (static_cast<int>(w.size()) != fam.dim)
    throw DomainError("HypothesisPoint::linear: dimension mismatch");
  HypothesisPoint h;
  h.family = fam;
  h.w = normalized(std::move(w));
  return h;
}

HypothesisPoint HypothesisPoint::glm(const HypothesisFamily& fam,
                                     std::vector<double> w, double b) {
  if (fam.kind != FamilyKind::glm && fam.kind != FamilyKind::relu_glm)
    throw DomainError("HypothesisPoint::glm: family mismatch");
  if (static_cast<int>(w.size()) != fam.dim)
    throw DomainError("HypothesisPoint::glm: dimension mismatch");
  if (std::abs(b) > fam.bias_bound + 1e-15)
    throw DomainError("HypothesisPoint::glm: |b| exceeds bias bound");
  HypothesisPoint h;
  h.family = fam;
  h.w = normalized(std::move(w));
  h.b = b;
  return h;
}

HypothesisPoint HypothesisPoint::one_layer_nn(const HypothesisFamily& fam,
                                              std::vector<double> u,
                                              std::vector<std::vector<double>> W) {
  if (fam.kind != FamilyKind::one_layer_nn)
    throw DomainError("HypothesisPoint::one_layer_nn: family mismatch");
  if (static_cast<int>(u.size()) != fam.width ||
      static_cast<int>(W.size()) != fam.width)
    throw DomainError("HypothesisPoint::one_layer_nn: width mismatch");
  double l1 = 0.0;
  for (double v : u) l1 += std::abs(v);
  if (l1 > fam.u_l1_bound + 1e-12)
    throw DomainError("HypothesisPoint::one_layer_nn: |u|_1 exceeds bound");
  for (const auto& wj : W) {
    if (static_cast<int>(wj.size()) != fam.dim)
      throw DomainError("HypothesisPoint::one_layer_nn: dimension mismatch");
    if (norm2(wj) > fam.w_norm_bound + 1e-12)
      throw DomainError("HypothesisPoint::one_layer_nn: |w_j| exceeds bound");
  }
  HypothesisPoint h;
  h.family = fam;
  h.u = std::move(u);
  h.W = std::move(W);
  return h;
}

HypothesisPoint HypothesisPoint::all_measurable(const HypothesisFamily& fam,
                                                double lo, double hi) {
  if (fam.kind != FamilyKind::all_measurable)
    throw DomainError("HypothesisPoint::all_measurable: family mismatch");
  if (lo > hi) throw DomainError("all_measurable: lo > hi");
  if (std::abs(lo) > fam.value_bound || std::abs(hi) > fam.value_bound)
    throw DomainError("all_measurable: pair exceeds value bound");
  HypothesisPoint h;
  h.family = fam;
  h.lo = lo;
  h.hi = hi;
  return h;
}

HypothesisPoint negate(const HypothesisPoint& h) {
  HypothesisPoint out = h;
  switch (h.family.kind) {
    case FamilyKind::linear:
      for (double& v : out.w) v = -v;
      return out;
    case FamilyKind::one_layer_nn:
      for (double& v : out.u) v = -v;
      return out;
    case FamilyKind::all_measurable:
      out.lo = -h.hi;
      out.hi = -h.lo;
      return out;
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      throw UnsupportedFamilyError("negate: glm families are not symmetric");
  }
  throw UnsupportedFamilyError("negate: unknown family");
}

double eval_hypothesis(const HypothesisPoint& h, std::span<const double> x) {
  if (static_cast<int>(x.size()) != h.family.dim)
    throw DomainError("eval_hypothesis: dimension mismatch");
  switch (h.family.kind) {
    case FamilyKind::linear:
      return dot(h.w, x);
    case FamilyKind::glm:
    case FamilyKind::relu_glm:
      return h.family.link(dot(h.w, x)) + h.b;
    case FamilyKind::one_layer_nn: {
      double s = 0.0;
      for (std::size_t j = 0; j < h.u.size(); ++j) {
        const double z = dot(h.W[j], x);
        if (z > 0.0) s += h.u[j] * z;
      }
      return s;
    }
    case FamilyKind::all_measurable:
      // Only the margin pair is meaningful for this family; evaluation
      // returns the lower value by convention.
      return h.lo;
  }
  throw UnsupportedFamilyError("eval_hypothesis: unknown family");
}

// ---------------------------------------------------------------------------
// Margins
// ---------------------------------------------------------------------------

MarginPair margins_oracle(const HypothesisPoint& h, std::span<const double> x,
                          double gamma, const BallGridSpec& grid) {
  if (h.family.kind == FamilyKind::all_measurable)
    return MarginPair{h.lo, h.hi, MarginMethod::closed_form};
  const int d = h.family.dim;
  if (d > 2) throw UnsupportedDimensionError("margins_oracle: d <= 2 only");
  if (grid.per_axis < 50)
    throw DomainError("margins_oracle: need >= 50 points per axis");

  const double outer = 1.0 + gamma;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (d == 1) {
    const double a = std::max(x[0] - gamma, -outer);
    const double b = std::min(x[0] + gamma, outer);
    double p[1];
    for (double t : linspace(a, b, grid.per_axis)) {
      p[0] = t;
      const double v = eval_hypothesis(h, std::span<const double>(p, 1));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  } else {
    const auto g0 = linspace(x[0] - gamma, x[0] + gamma, grid.per_axis);
    const auto g1 = linspace(x[1] - gamma, x[1] + gamma, grid.per_axis);
    const double g2 = gamma * gamma, o2 = outer * outer;
    double p[2];
    for (double a : g0)
      for (double b : g1) {
        const double da = a - x[0], db = b - x[1];
        if (da * da + db * db > g2) continue;
        if (a * a + b * b > o2) continue;
        p[0] = a;
        p[1] = b;
        const double v = eval_hypothesis(h, std::span<const double>(p, 2));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  }
  return MarginPair{lo, hi, MarginMethod::grid_oracle};
}

MarginPair adversarial_margins(const HypothesisPoint& h, std::span<const double> x,
                               double gamma, const BallGridSpec& oracle) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("adversarial_margins: gamma outside (0,1)");
  if (static_cast<int>(x.size()) != h.family.dim)
    throw DomainError("adversarial_margins: dimension mismatch");
  switch (h.family.kind) {
    case FamilyKind::linear: {
      const double t = dot(h.w, x);
      return {t - gamma, t + gamma, MarginMethod::closed_form};
    }
    case FamilyKind::glm:
    case FamilyKind::relu_glm: {
      const double s = dot(h.w, x);
      return {h.family.link(s - gamma) + h.b, h.family.link(s + gamma) + h.b,
              MarginMethod::closed_form};
    }
    case FamilyKind::one_layer_nn:
      return margins_oracle(h, x, gamma, oracle);
    case FamilyKind::all_measurable:
      return {h.lo, h.hi, MarginMethod::closed_form};
  }
  throw UnsupportedFamilyError("adversarial_margins: unknown family");
}

// ---------------------------------------------------------------------------
// Regularity and link increment bounds
// ---------------------------------------------------------------------------

std::pair<double, double> a_bounds(const MonotoneFn& g, double t, double gamma,
                                   int s_points) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("a_bounds: t outside [0,1]");
  if (g.kind() == LinkKind::identity) return {gamma, -gamma};
  if (g.kind() == LinkKind::relu) return {std::min(t, gamma), -gamma};
  std::vector<double> extra;
  for (double bp : g.breakpoints()) {
    extra.push_back(bp);
    extra.push_back(bp + gamma);
    extra.push_back(bp - gamma);
  }
  const auto ss = grid_with_points(-t, t, s_points, extra);
  double upper = -std::numeric_limits<double>::infinity();
  double lower = std::numeric_limits<double>::infinity();
  for (double s : ss) {
    upper = std::max(upper, g(s) - g(s - gamma));
    lower = std::min(lower, g(s) - g(s + gamma));
  }
  return {upper, lower};
}

bool is_regular_at(const HypothesisFamily& family, std::span<const double> x,
                   double gamma, const ParamGridSpec& params,
                   const BallGridSpec& oracle) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("is_regular_at: gamma outside (0,1)");
  const double r = norm2(x);
  switch (family.kind) {
    case FamilyKind::linear:
      return r > gamma;
    case FamilyKind::glm:
    case FamilyKind::relu_glm: {
      // sup over w of min-margin is g(|x| - gamma) + G; inf of max-margin is
      // g(gamma - |x|) - G (link monotone, w ranges over the sphere).
      const double pos = family.link(r - gamma) + family.bias_bound;
      const double neg = family.link(gamma - r) - family.bias_bound;
      return pos > 0.0 && neg < 0.0;
    }
    case FamilyKind::all_measurable:
      return true;
    case FamilyKind::one_layer_nn: {
      // A single beam aligned with x is the natural candidate; fall back to
      // the full parameter grid if it fails.
      if (r > 0.0 && family.dim <= 2) {
        std::vector<double> wx(x.begin(), x.end());
        for (double& v : wx) v *= family.w_norm_bound / r;
        std::vector<double> u(static_cast<std::size_t>(family.width), 0.0);
        u[0] = family.u_l1_bound;
        std::vector<std::vector<double>> W(
            static_cast<std::size_t>(family.width),
            std::vector<double>(static_cast<std::size_t>(family.dim), 0.0));
        W[0] = wx;
        const auto beam = HypothesisPoint::one_layer_nn(family, std::move(u), std::move(W));
        if (margins_oracle(beam, x, gamma, oracle).lower > 0.0) return true;
      }
      for (const auto& h : param_grid(family, params))
        if (margins_oracle(h, x, gamma, oracle).lower > 0.0) return true;
      return false;
    }
  }
  throw UnsupportedFamilyError("is_regular_at: unknown family");
}

// ---------------------------------------------------------------------------
// Parameter grids
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> sphere_grid(int d, int angles) {
  std::vector<std::vector<double>> out;
  if (d == 1) {
    out.push_back({1.0});
    out.push_back({-1.0});
    return out;
  }
  out.reserve(static_cast<std::size_t>(angles));
  for (int k = 0; k < angles; ++k) {
    const double th = 2.0 * std::numbers::pi * k / angles;
    out.push_back({std::cos(th), std::sin(th)});
  }
  return out;
}

}  // namespace

std::vector<HypothesisPoint> param_grid(const HypothesisFamily& family,
                                        const ParamGridSpec& spec) {
  if (family.dim > 2)
    throw UnsupportedDimensionError("param_grid: d in {1,2} only");
  std::vector<HypothesisPoint> out;
  switch (family.kind) {
    case FamilyKind::linear: {
      for (auto& w : sphere_grid(family.dim, spec.angles))
        out.push_back(HypothesisPoint::linear(family, std::move(w)));
      return out;
    }
    case FamilyKind::glm:
    case FamilyKind::relu_glm: {
      const auto ws = sphere_grid(family.dim, spec.angles);
      const auto bs = family.bias_bound > 0.0
                          ? linspace(-family.bias_bound, family.bias_bound,
                                     spec.biases)
                          : std::vector<double>{0.0};
      out.reserve(ws.size() * bs.size());
      for (const auto& w : ws)
        for (double b : bs) out.push_back(HypothesisPoint::glm(family, w, b));
      return out;
    }
    case FamilyKind::all_measurable: {
      const auto axis =
          linspace(-family.value_bound, family.value_bound, spec.pair_axis);
      for (double a : axis)
        for (double b : axis)
          if (a <= b) out.push_back(HypothesisPoint::all_measurable(family, a, b));
      return out;
    }
    case FamilyKind::one_layer_nn: {
      if (family.width != 1 && family.width != 2)
        throw UnsupportedDimensionError(
            "param_grid: one_layer_nn grids are defined for widths 1 and 2");
      const double L = family.u_l1_bound;
      // l1-sphere surface plus the zero network (the family contains 0).
      std::vector<std::vector<double>> us;
      if (family.width == 1) {
        us = {{0.0}, {L}, {-L}};
      } else {
        us.push_back({0.0, 0.0});
        const int per_edge = std::max(1, spec.nn_u / 4);
        for (int i = 0; i < per_edge; ++i) {
          const double s = static_cast<double>(i + 1) / per_edge;
          const double a = s * L, b = (1.0 - s) * L;
          us.push_back({a, b});
          us.push_back({-a, b});
          us.push_back({a, -b});
          us.push_back({-a, -b});
        }
        std::sort(us.begin(), us.end());
        us.erase(std::unique(us.begin(), us.end()), us.end());
      }

      std::vector<std::vector<double>> ws;
      for (int ri = 1; ri <= spec.nn_w_radii; ++ri) {
        const double rad = family.w_norm_bound * ri / spec.nn_w_radii;
        for (auto& dir : sphere_grid(family.dim, spec.nn_w_angles)) {
          auto w = dir;
          for (double& v : w) v *= rad;
          ws.push_back(std::move(w));
        }
      }
      for (const auto& u : us) {
        if (family.width == 1) {
          for (const auto& w1 : ws)
            out.push_back(HypothesisPoint::one_layer_nn(family, u, {w1}));
        } else {
          for (const auto& w1 : ws)
            for (const auto& w2 : ws)
              out.push_back(HypothesisPoint::one_layer_nn(family, u, {w1, w2}));
        }
      }
      return out;
    }
  }
  throw UnsupportedFamilyError("param_grid: unknown family");
}

}  // namespace advcal
