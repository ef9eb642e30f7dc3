#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "advcal/errors.hpp"
#include "advcal/hypotheses.hpp"
#include "test_support.hpp"

using namespace advcal;

namespace {

const HypothesisFamily kLin2 = HypothesisFamily::linear(2);
const HypothesisFamily kRelu05 = HypothesisFamily::relu_glm(2, 0.5);
const HypothesisFamily kNN = HypothesisFamily::one_layer_nn(2, 2, 1.0, 1.0);
const HypothesisFamily kAll = HypothesisFamily::all_measurable(2, 2.0);

}  // namespace

TEST_CASE("hypothesis evaluation") {
  const auto lin = HypothesisPoint::linear(kLin2, {1.0, 0.0});
  CHECK(eval_hypothesis(lin, std::vector<double>{0.5, 0.0}) == 0.5);

  const auto glm = HypothesisPoint::glm(kRelu05, {1.0, 0.0}, -0.1);
  CHECK(eval_hypothesis(glm, std::vector<double>{0.3, 0.0}) == doctest::Approx(0.2));

  const auto zero_net = HypothesisPoint::one_layer_nn(
      kNN, {0.0, 0.0}, {{0.3, 0.4}, {-0.5, 0.1}});
  CHECK(eval_hypothesis(zero_net, std::vector<double>{0.7, -0.2}) == 0.0);

  CHECK_THROWS_AS(eval_hypothesis(lin, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("parameter constraints enforced at construction") {
  CHECK_THROWS_AS(HypothesisPoint::linear(kLin2, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(HypothesisPoint::glm(kRelu05, {1.0, 0.0}, 0.9), DomainError);
  CHECK_THROWS_AS(
      HypothesisPoint::one_layer_nn(kNN, {0.8, 0.4}, {{1.0, 0.0}, {0.0, 1.0}}),
      DomainError);
  CHECK_THROWS_AS(HypothesisPoint::all_measurable(kAll, 0.5, -0.5), DomainError);
  CHECK_THROWS_AS(HypothesisPoint::all_measurable(kAll, -3.0, 0.0), DomainError);
  // non-unit directions are normalized
  const auto h = HypothesisPoint::linear(kLin2, {3.0, 4.0});
  CHECK(norm2(h.w) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form adversarial margins") {
  const auto lin = HypothesisPoint::linear(kLin2, {1.0, 0.0});
  const MarginPair lm = adversarial_margins(lin, std::vector<double>{0.5, 0.0}, 0.2);
  CHECK(lm.lower == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(lm.upper == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(lm.method == MarginMethod::closed_form);

  const auto glm = HypothesisPoint::glm(kRelu05, {1.0, 0.0}, -0.1);
  const MarginPair gm = adversarial_margins(glm, std::vector<double>{0.3, 0.0}, 0.2);
  CHECK(gm.lower == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gm.upper == doctest::Approx(0.4).epsilon(1e-15));

  const auto zero_net = HypothesisPoint::one_layer_nn(
      kNN, {0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
  const MarginPair nm = adversarial_margins(zero_net, std::vector<double>{0.4, 0.1}, 0.3);
  CHECK(nm.lower == 0.0);
  CHECK(nm.upper == 0.0);
  CHECK(nm.method == MarginMethod::grid_oracle);

  CHECK_THROWS_AS(adversarial_margins(lin, std::vector<double>{0.5, 0.0}, 0.0),
                  DomainError);
  CHECK_THROWS_AS(adversarial_margins(lin, std::vector<double>{0.5, 0.0}, 1.0),
                  DomainError);
}

TEST_CASE("ball-grid oracle") {
  const std::vector<double> x{0.5, 0.0};
  const auto lin = HypothesisPoint::linear(kLin2, {1.0, 0.0});
  const MarginPair o = margins_oracle(lin, x, 0.2, {200});
  CHECK(std::abs(o.lower - 0.3) <= 1e-3);
  CHECK(std::abs(o.upper - 0.7) <= 1e-3);
  CHECK(o.method == MarginMethod::grid_oracle);

  const auto glm = HypothesisPoint::glm(kRelu05, {0.0, 1.0}, 0.0);
  const MarginPair og = margins_oracle(glm, std::vector<double>{0.0, 0.0}, 0.2, {200});
  CHECK(std::abs(og.lower - 0.0) <= 1e-3);
  CHECK(std::abs(og.upper - 0.2) <= 1e-3);

  const auto pair = HypothesisPoint::all_measurable(kAll, -0.4, 0.2);
  const MarginPair op = margins_oracle(pair, std::vector<double>{0.1, 0.1}, 0.2);
  CHECK(op.lower == -0.4);
  CHECK(op.upper == 0.2);

  const auto lin3 = HypothesisPoint::linear(HypothesisFamily::linear(3), {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(margins_oracle(lin3, std::vector<double>{0.0, 0.0, 0.0}, 0.2),
                  UnsupportedDimensionError);
  CHECK_THROWS_AS(margins_oracle(lin, x, 0.2, {10}), DomainError);
}

TEST_CASE("closed form agrees with the oracle on random draws") {
  std::mt19937_64 rng(20240812u);
  auto random_x = [&](double max_norm) {
    for (;;) {
      std::vector<double> x{testsup::uniform(rng, -1.0, 1.0),
                            testsup::uniform(rng, -1.0, 1.0)};
      if (norm2(x) <= max_norm) return x;
    }
  };
  for (int k = 0; k < 20; ++k) {
    const double gamma = testsup::uniform(rng, 0.05, 0.9);
    const double angle = testsup::uniform(rng, 0.0, 6.28);
    const std::vector<double> w{std::cos(angle), std::sin(angle)};
    const auto x = random_x(1.0);

    const auto lin = HypothesisPoint::linear(kLin2, w);
    const MarginPair lc = adversarial_margins(lin, x, gamma);
    const MarginPair lo = margins_oracle(lin, x, gamma, {200});
    CHECK(std::abs(lc.lower - lo.lower) <= 1e-2);
    CHECK(std::abs(lc.upper - lo.upper) <= 1e-2);

    const double b = testsup::uniform(rng, -0.5, 0.5);
    const auto glm = HypothesisPoint::glm(kRelu05, w, b);
    const MarginPair gc = adversarial_margins(glm, x, gamma);
    const MarginPair go = margins_oracle(glm, x, gamma, {200});
    CHECK(std::abs(gc.lower - go.lower) <= 1e-2);
    CHECK(std::abs(gc.upper - go.upper) <= 1e-2);
  }
}

TEST_CASE("negation flips margins exactly for symmetric families") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const double gamma = testsup::uniform(rng, 0.1, 0.8);
    const std::vector<double> x{testsup::uniform(rng, -0.6, 0.6),
                                testsup::uniform(rng, -0.6, 0.6)};
    const double angle = testsup::uniform(rng, 0.0, 6.28);

    const auto lin = HypothesisPoint::linear(kLin2, {std::cos(angle), std::sin(angle)});
    const MarginPair m = adversarial_margins(lin, x, gamma);
    const MarginPair mn = adversarial_margins(negate(lin), x, gamma);
    CHECK(mn.lower == -m.upper);
    CHECK(mn.upper == -m.lower);

    const auto net = HypothesisPoint::one_layer_nn(
        kNN, {0.6, -0.4},
        {{std::cos(angle), std::sin(angle)}, {0.3, -0.2}});
    const MarginPair nm = margins_oracle(net, x, gamma, {60});
    const MarginPair nn = margins_oracle(negate(net), x, gamma, {60});
    CHECK(nn.lower == -nm.upper);
    CHECK(nn.upper == -nm.lower);

    const auto pair = HypothesisPoint::all_measurable(kAll, -0.7, 0.3);
    const MarginPair pm = adversarial_margins(negate(pair), x, gamma);
    CHECK(pm.lower == -0.3);
    CHECK(pm.upper == 0.7);
  }
  CHECK_THROWS_AS(negate(HypothesisPoint::glm(kRelu05, {1.0, 0.0}, 0.1)),
                  UnsupportedFamilyError);
}

TEST_CASE("linear margins: width is exactly 2 gamma") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const double gamma = testsup::uniform(rng, 0.05, 0.95);
    const double angle = testsup::uniform(rng, 0.0, 6.28);
    const std::vector<double> x{testsup::uniform(rng, -0.7, 0.7),
                                testsup::uniform(rng, -0.7, 0.7)};
    const auto lin = HypothesisPoint::linear(kLin2, {std::cos(angle), std::sin(angle)});
    const MarginPair m = adversarial_margins(lin, x, gamma);
    CHECK(m.upper - m.lower == doctest::Approx(2.0 * gamma).epsilon(1e-12));
  }
}

TEST_CASE("regularity per family") {
  CHECK(is_regular_at(kLin2, std::vector<double>{0.5, 0.0}, 0.2));
  CHECK_FALSE(is_regular_at(kLin2, std::vector<double>{0.0, 0.0}, 0.2));
  CHECK_FALSE(is_regular_at(kLin2, std::vector<double>{0.1, 0.0}, 0.2));
  CHECK(is_regular_at(kRelu05, std::vector<double>{0.0, 0.0}, 0.2));
  CHECK(is_regular_at(kAll, std::vector<double>{0.0, 0.0}, 0.2));
  CHECK(is_regular_at(kNN, std::vector<double>{0.5, 0.0}, 0.2));

  // linear: regular iff |x| > gamma, on a grid
  for (double r : linspace(0.0, 1.0, 21)) {
    const bool reg = is_regular_at(kLin2, std::vector<double>{r, 0.0}, 0.3);
    CHECK(reg == (r > 0.3));
  }
}

TEST_CASE("link increment bounds") {
  {
    const auto [up, lo] = a_bounds(MonotoneFn::relu(), 0.5, 0.2);
    CHECK(up == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(lo == doctest::Approx(-0.2).epsilon(1e-12));
  }
  {
    const auto [up, lo] = a_bounds(MonotoneFn::relu(), 0.1, 0.2);
    CHECK(up == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(lo == doctest::Approx(-0.2).epsilon(1e-12));
  }
  {
    const auto [up, lo] = a_bounds(MonotoneFn::identity(), 0.7, 0.3);
    CHECK(up == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(lo == doctest::Approx(-0.3).epsilon(1e-12));
  }
  // A table replica of the relu link reproduces the closed forms through
  // the dense-grid path.
  const MonotoneFn table = MonotoneFn::table({{-2.0, 0.0}, {0.0, 0.0}, {2.0, 2.0}});
  for (double t : {0.1, 0.5, 1.0}) {
    const auto [up, lo] = a_bounds(table, t, 0.2);
    CHECK(up == doctest::Approx(std::min(t, 0.2)).epsilon(1e-9));
    CHECK(lo == doctest::Approx(-0.2).epsilon(1e-9));
  }
  CHECK_THROWS_AS(a_bounds(MonotoneFn::relu(), -0.1, 0.2), DomainError);
}

TEST_CASE("monotone links") {
  CHECK_THROWS_AS(MonotoneFn::table({{0.0, 1.0}, {1.0, 0.5}}), DomainError);
  const MonotoneFn g = MonotoneFn::table({{-1.0, 0.0}, {0.0, 0.2}, {1.0, 0.2}, {2.0, 1.0}});
  const auto ss = linspace(-2.0, 3.0, 501);
  for (std::size_t i = 1; i < ss.size(); ++i) CHECK(g(ss[i - 1]) <= g(ss[i]));
}

TEST_CASE("parameter grids") {
  ParamGridSpec spec;
  const auto lin = param_grid(kLin2, spec);
  CHECK(lin.size() == 720);
  for (const auto& h : lin)
    CHECK(std::abs(norm2(h.w) - 1.0) <= 1e-12);

  const auto lin1 = param_grid(HypothesisFamily::linear(1), spec);
  CHECK(lin1.size() == 2);

  const auto glm = param_grid(HypothesisFamily::glm(2, MonotoneFn::identity(), 1.0), spec);
  CHECK(glm.size() == 720u * 41u);
  for (const auto& h : glm) CHECK(std::abs(h.b) <= 1.0);

  const auto pairs = param_grid(kAll, spec);
  CHECK(pairs.size() == 41u * 42u / 2u);
  for (const auto& h : pairs) CHECK(h.lo <= h.hi);

  const auto nets = param_grid(kNN, spec);
  bool has_zero = false;
  for (const auto& h : nets) {
    double l1 = 0.0;
    for (double u : h.u) l1 += std::abs(u);
    CHECK(l1 <= 1.0 + 1e-12);
    if (l1 == 0.0) has_zero = true;
  }
  CHECK(has_zero);

  CHECK_THROWS_AS(param_grid(HypothesisFamily::linear(3), spec),
                  UnsupportedDimensionError);
}
