#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advcal/grid.hpp"
#include "advcal/losses.hpp"

namespace advcal {

enum class LinkKind { identity, relu, table };

// Non-decreasing continuous scalar link for generalized linear hypotheses.
class MonotoneFn {
 public:
  static MonotoneFn identity();
  static MonotoneFn relu();
  // Piecewise-linear table; rejected unless non-decreasing. Constant beyond
  // the table range.
  static MonotoneFn table(std::vector<std::pair<double, double>> points);

  double operator()(double s) const;
  LinkKind kind() const { return kind_; }
  std::vector<double> breakpoints() const;

 private:
  MonotoneFn() = default;
  LinkKind kind_ = LinkKind::identity;
  std::vector<std::pair<double, double>> table_;
};

enum class FamilyKind { linear, glm, relu_glm, one_layer_nn, all_measurable };

struct HypothesisFamily {
  FamilyKind kind = FamilyKind::linear;
  int dim = 2;
  MonotoneFn link = MonotoneFn::identity();  // glm / relu_glm
  double bias_bound = 0.0;                   // G
  double u_l1_bound = 1.0;                   // Lambda (one_layer_nn)
  double w_norm_bound = 1.0;                 // W (one_layer_nn)
  int width = 1;                             // n (one_layer_nn)
  double value_bound = 2.0;                  // R (all_measurable)

  static HypothesisFamily linear(int d);
  static HypothesisFamily glm(int d, MonotoneFn g, double G);
  static HypothesisFamily relu_glm(int d, double G);
  static HypothesisFamily one_layer_nn(int d, int n, double lambda, double W);
  static HypothesisFamily all_measurable(int d, double R = 2.0);

  // Closed under negation: linear, one_layer_nn, all_measurable.
  bool symmetric() const;
  std::string kind_name() const;
};

// One hypothesis in a family. Parameter-space constraints are enforced at
// construction (unit-norm w, |b| <= G, ...). all_measurable points are
// identified by their reachable margin pair (lo, hi) at the query point.
struct HypothesisPoint {
  HypothesisFamily family;
  std::vector<double> w;               // linear / glm direction, unit norm
  double b = 0.0;                      // glm bias
  std::vector<double> u;               // nn outer weights, |u|_1 <= Lambda
  std::vector<std::vector<double>> W;  // nn inner weights, |W_j| <= W bound
  double lo = 0.0, hi = 0.0;           // all_measurable margin pair

  static HypothesisPoint linear(const HypothesisFamily& fam, std::vector<double> w);
  static HypothesisPoint glm(const HypothesisFamily& fam, std::vector<double> w,
                             double b);
  static HypothesisPoint one_layer_nn(const HypothesisFamily& fam,
                                      std::vector<double> u,
                                      std::vector<std::vector<double>> W);
  static HypothesisPoint all_measurable(const HypothesisFamily& fam, double lo,
                                        double hi);
};

// -f for families closed under negation; glm raises unsupported-family.
HypothesisPoint negate(const HypothesisPoint& h);

double eval_hypothesis(const HypothesisPoint& h, std::span<const double> x);

// (inf, sup) of f over the gamma-ball around x. Closed forms for linear and
// glm; ball-grid oracle for one_layer_nn (d <= 2); stored pair for
// all_measurable.
MarginPair adversarial_margins(const HypothesisPoint& h, std::span<const double> x,
                               double gamma, const BallGridSpec& oracle = {});

// Brute-force (min, max) of f over a uniform grid covering the gamma-ball
// intersected with the radius-(1+gamma) ball. d <= 2.
MarginPair margins_oracle(const HypothesisPoint& h, std::span<const double> x,
                          double gamma, const BallGridSpec& grid = {});

// True iff some member is strictly positive and some strictly negative on
// the whole gamma-ball around x.
bool is_regular_at(const HypothesisFamily& family, std::span<const double> x,
                   double gamma, const ParamGridSpec& params = {},
                   const BallGridSpec& oracle = {});

// Extremal link increments over s in [-t, t]:
//   upper = max g(s) - g(s - gamma),  lower = min g(s) - g(s + gamma).
// Closed forms for identity and relu links, dense s-grid otherwise.
std::pair<double, double> a_bounds(const MonotoneFn& g, double t, double gamma,
                                   int s_points = 2001);

// Deterministic discretization of the family's parameter space (d <= 2).
std::vector<HypothesisPoint> param_grid(const HypothesisFamily& family,
                                        const ParamGridSpec& spec = {});

double norm2(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace advcal
