#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "advcal/errors.hpp"
#include "advcal/risk.hpp"
#include "test_support.hpp"

using namespace advcal;

namespace {

const HypothesisFamily kLin2 = HypothesisFamily::linear(2);
const HypothesisFamily kAll = HypothesisFamily::all_measurable(2, 2.0);

MarginPair pair(double lo, double hi) { return {lo, hi, MarginMethod::closed_form}; }

}  // namespace

TEST_CASE("adversarial 0/1 inner risk is piecewise in the margin signs") {
  CHECK(adv01_inner_risk(pair(0.3, 0.7), 0.7) == doctest::Approx(0.3));
  CHECK(adv01_inner_risk(pair(-0.5, -0.1), 0.7) == doctest::Approx(0.7));
  for (double eta : {0.0, 0.25, 0.5, 1.0})
    CHECK(adv01_inner_risk(pair(0.0, 0.0), eta) == 1.0);
  CHECK(adv01_inner_risk(pair(-0.1, 0.2), 0.7) == 1.0);
  // boundary included on both sides, exact comparisons
  CHECK(adv01_inner_risk(pair(0.0, 0.4), 0.3) == 1.0);
  CHECK(adv01_inner_risk(pair(-0.4, 0.0), 0.3) == 1.0);
  CHECK_THROWS_AS(adv01_inner_risk(pair(0.5, -0.5), 0.5), DomainError);
  CHECK_THROWS_AS(adv01_inner_risk(pair(0.0, 0.0), 1.5), DomainError);
}

TEST_CASE("inner risk per loss form") {
  const auto e1 = HypothesisPoint::linear(kLin2, {1.0, 0.0});
  const std::vector<double> x{0.5, 0.0};

  CHECK(inner_risk(Surrogate::plain(MarginLoss::hinge()), e1, x, 0.5, 0.2) ==
        doctest::Approx(1.0));
  CHECK(inner_risk(Surrogate::sup(MarginLoss::rho_margin(1.0)), e1, x, 1.0, 0.2) ==
        doctest::Approx(0.7));
  // adv01 form evaluates the margin-sign formula
  CHECK(inner_risk(Surrogate::adversarial01(), e1, x, 0.7, 0.2) ==
        doctest::Approx(0.3));
  CHECK(inner_risk(Surrogate::adversarial01(), e1, std::vector<double>{0.1, 0.0},
                   0.7, 0.2) == 1.0);
}

TEST_CASE("adv01 inner risk equals the sup-based zero-one evaluation") {
  // Eq-style identity: the adversarial 0/1 target is the sup form of the
  // 0/1 loss. Random hypotheses and points.
  std::mt19937_64 rng(7);
  const MarginLoss zo = MarginLoss::zero_one();
  for (int k = 0; k < 100; ++k) {
    const double gamma = testsup::uniform(rng, 0.05, 0.9);
    const double angle = testsup::uniform(rng, 0.0, 6.28);
    std::vector<double> x{testsup::uniform(rng, -0.7, 0.7),
                          testsup::uniform(rng, -0.7, 0.7)};
    const auto h = HypothesisPoint::linear(kLin2, {std::cos(angle), std::sin(angle)});
    const double eta = testsup::uniform(rng, 0.0, 1.0);
    const MarginPair m = margins_oracle(h, x, gamma, {60});
    const double direct = eta * sup_loss_value(zo, m, +1) +
                          (1.0 - eta) * sup_loss_value(zo, m, -1);
    CHECK(adv01_inner_risk(m, eta) == direct);
  }
}

TEST_CASE("region classification") {
  CHECK(region_classify(kLin2, std::vector<double>{0.5, 0.0}, 0.2) == RegionTag::X2);
  CHECK(region_classify(kLin2, std::vector<double>{0.1, 0.0}, 0.2) == RegionTag::X1);
  CHECK(region_classify(kAll, std::vector<double>{0.0, 0.0}, 0.2) == RegionTag::X2);
  CHECK_THROWS_AS(region_classify(HypothesisFamily::relu_glm(2, 0.5),
                                  std::vector<double>{0.5, 0.0}, 0.2),
                  UnsupportedFamilyError);
}

TEST_CASE("minimal inner risks") {
  SUBCASE("adversarial target, analytic") {
    CHECK(minimal_inner_risk(Surrogate::adversarial01(), kLin2,
                             std::vector<double>{0.5, 0.0}, 0.3, 0.2) ==
          doctest::Approx(0.3));
    for (double eta : {0.0, 0.3, 0.5, 0.9})
      CHECK(minimal_inner_risk(Surrogate::adversarial01(), kLin2,
                               std::vector<double>{0.1, 0.0}, eta, 0.2) == 1.0);
    // glm has no region tags; the normalized link gives min{eta, 1-eta}
    CHECK(minimal_inner_risk(Surrogate::adversarial01(),
                             HypothesisFamily::relu_glm(2, 1.5),
                             std::vector<double>{0.5, 0.0}, 0.3, 0.2) ==
          doctest::Approx(0.3));
  }

  SUBCASE("plain quasi-concave-even loss on linear: endpoint rule value") {
    const double v = minimal_inner_risk(Surrogate::plain(MarginLoss::rho_margin(1.0)),
                                        kLin2, std::vector<double>{0.9, 0.0}, 0.5, 0.2);
    CHECK(v == doctest::Approx(0.55).epsilon(1e-12));
  }

  SUBCASE("infimum property: no grid hypothesis does better") {
    const Surrogate s = Surrogate::sup(MarginLoss::rho_margin(1.0));
    const std::vector<double> x{0.6, 0.0};
    const double vmin = minimal_inner_risk(s, kLin2, x, 0.7, 0.2);
    for (const auto& h : param_grid(kLin2, {}))
      CHECK(inner_risk(s, h, x, 0.7, 0.2) >= vmin - 1e-12);
  }

  SUBCASE("straddling hypotheses pay exactly 1/2 at eta = 1/2 on X2") {
    const std::vector<double> x{0.5, 0.0};
    const double cstar =
        minimal_inner_risk(Surrogate::adversarial01(), kLin2, x, 0.5, 0.2);
    CHECK(cstar == doctest::Approx(0.5));
    const auto h = HypothesisPoint::linear(kLin2, {0.0, 1.0});  // f(x) = 0
    const double risk = inner_risk(Surrogate::adversarial01(), h, x, 0.5, 0.2);
    CHECK(risk - cstar == doctest::Approx(0.5));
  }

  SUBCASE("endpoint value agrees with the parameter-grid minimum") {
    const Surrogate s = Surrogate::plain(MarginLoss::rho_margin(1.0));
    for (double r : {0.35, 0.6, 0.85}) {
      const std::vector<double> x{r, 0.0};
      double grid_min = std::numeric_limits<double>::infinity();
      for (const auto& h : param_grid(kLin2, {}))
        grid_min = std::min(grid_min, inner_risk(s, h, x, 0.5, 0.2));
      const double v = minimal_inner_risk(s, kLin2, x, 0.5, 0.2);
      CHECK(v <= grid_min + 1e-12);
      CHECK(grid_min - v <= 5e-3);  // 720-angle grid resolution
    }
  }
}
