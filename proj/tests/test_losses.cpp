#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "advcal/errors.hpp"
#include "advcal/losses.hpp"
#include "test_support.hpp"

using namespace advcal;

TEST_CASE("loss evaluation") {
  CHECK(eval_loss(MarginLoss::rho_margin(2.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_loss(MarginLoss::rho_margin(1.0), -0.3) == 1.0);
  CHECK(eval_loss(MarginLoss::hinge(), 0.0) == 1.0);
  CHECK(eval_loss(MarginLoss::zero_one(), 0.0) == 1.0);
  CHECK(eval_loss(MarginLoss::zero_one(), 1e-9) == 0.0);
  CHECK(eval_loss(MarginLoss::logistic(), 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(eval_loss(MarginLoss::exponential(), -1.0) == doctest::Approx(std::exp(1.0)));

  CHECK_THROWS_AS(MarginLoss::rho_margin(0.0), InvalidLossError);
  CHECK_THROWS_AS(MarginLoss::rho_margin(-1.0), InvalidLossError);
}

TEST_CASE("loss values are nonnegative on the standard grid") {
  const auto losses = {MarginLoss::zero_one(), MarginLoss::rho_margin(0.5),
                       MarginLoss::rho_margin(2.0), MarginLoss::hinge(),
                       MarginLoss::logistic(), MarginLoss::exponential()};
  for (const auto& loss : losses)
    for (double t : linspace(-3.0, 3.0, 2001)) CHECK(loss(t) >= 0.0);
}

TEST_CASE("ramp loss shape: flat at 1, affine, flat at 0") {
  for (double rho : {0.5, 1.0, 2.0}) {
    const MarginLoss phi = MarginLoss::rho_margin(rho);
    for (double t : linspace(-3.0, 3.0, 601)) {
      if (t <= 0.0) {
        CHECK(phi(t) == 1.0);
      } else if (t >= rho) {
        CHECK(phi(t) == 0.0);
      } else {
        CHECK(phi(t) == doctest::Approx(1.0 - t / rho).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("worst-case loss value from margins") {
  const MarginPair m{-0.2, 0.4, MarginMethod::closed_form};
  CHECK(sup_loss_value(MarginLoss::hinge(), m, +1) == doctest::Approx(1.2));
  CHECK(sup_loss_value(MarginLoss::rho_margin(1.0), {0.3, 0.7, MarginMethod::closed_form}, -1) == 1.0);
  CHECK(sup_loss_value(MarginLoss::rho_margin(1.0), {0.0, 0.0, MarginMethod::closed_form}, +1) == 1.0);

  CHECK_THROWS_AS(sup_loss_value(MarginLoss::hinge(), {0.4, -0.2, MarginMethod::closed_form}, 1),
                  DomainError);
  // V-shaped table: not non-increasing, so the inf-margin identity is
  // unavailable.
  const MarginLoss vee = MarginLoss::custom_table({{-1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}}, {});
  CHECK_THROWS_AS(sup_loss_value(vee, m, 1), UnsupportedReductionError);
}

TEST_CASE("two-point conditional risk") {
  CHECK(cbar(MarginLoss::rho_margin(1.0), 0.5, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  for (double rho : {0.5, 1.0, 3.0})
    for (double eta : {0.0, 0.3, 1.0})
      CHECK(cbar(MarginLoss::rho_margin(rho), 0.0, eta) == 1.0);
  CHECK(cbar(MarginLoss::hinge(), 0.3, 1.0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(cbar(MarginLoss::hinge(), 0.0, 1.5), DomainError);
  CHECK_THROWS_AS(cbar(MarginLoss::hinge(), 0.0, -0.1), DomainError);
}

TEST_CASE("interval infimum of the conditional risk") {
  const MarginLoss r1 = MarginLoss::rho_margin(1.0);
  const MarginLoss r2 = MarginLoss::rho_margin(2.0);

  SUBCASE("frozen examples, cross-checked against the dense-grid oracle") {
    const double v1 = cbar_interval_inf(r1, -0.9, 0.2, 0.5);
    CHECK(v1 == doctest::Approx(0.55).epsilon(1e-12));
    const double oracle1 = testsup::cbar_grid_inf(
        [](double t) { return testsup::ramp(1.0, t); }, -0.9, 0.2, 0.5, 10001);
    CHECK(std::abs(v1 - oracle1) <= 1e-6);

    const double v2 = cbar_interval_inf(r2, -0.2, 0.2, 0.5);
    CHECK(v2 == doctest::Approx(0.95).epsilon(1e-12));
    const double oracle2 = testsup::cbar_grid_inf(
        [](double t) { return testsup::ramp(2.0, t); }, -0.2, 0.2, 0.5, 10001);
    CHECK(std::abs(v2 - oracle2) <= 1e-6);
  }

  SUBCASE("degenerate interval") {
    for (double c : {-0.7, 0.0, 1.3})
      CHECK(cbar_interval_inf(r1, c, c, 0.3) == cbar(r1, c, 0.3));
  }

  SUBCASE("domain error") {
    CHECK_THROWS_AS(cbar_interval_inf(r1, 0.5, -0.5, 0.5), DomainError);
  }

  SUBCASE("endpoint rule matches the oracle on random intervals") {
    std::mt19937_64 rng(11);
    for (double rho : {0.5, 1.0, 2.0}) {
      const MarginLoss phi = MarginLoss::rho_margin(rho);
      for (int k = 0; k < 20; ++k) {
        double l = testsup::uniform(rng, -3.0, 3.0);
        double u = testsup::uniform(rng, -3.0, 3.0);
        if (l > u) std::swap(l, u);
        const double eta = testsup::uniform(rng, 0.0, 1.0);
        const auto res = cbar_interval_inf_full(phi, l, u, eta);
        CHECK(res.endpoint_exact);
        const double oracle = testsup::cbar_grid_inf(
            [rho](double t) { return testsup::ramp(rho, t); }, l, u, eta, 10001);
        CHECK(std::abs(res.value - oracle) <= 1e-6);
      }
    }
  }

  SUBCASE("non-endpoint losses fall back to the grid") {
    const auto res = cbar_interval_inf_full(MarginLoss::hinge(), -2.0, 2.0, 0.5);
    CHECK_FALSE(res.endpoint_exact);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-9));  // flat on [-1,1]
  }
}

TEST_CASE("property verifier separates the loss zoo") {
  const GridSpec grid;

  SUBCASE("ramp losses pass every quasi-concave-even check") {
    for (double rho : {0.5, 1.0, 2.0}) {
      const auto report = verify_loss_properties(MarginLoss::rho_margin(rho), grid);
      CHECK(report.passed("non_negative"));
      CHECK(report.passed("non_increasing"));
      CHECK(report.passed("bounded_flat_tails"));
      CHECK(report.passed("cbar_unimodal"));
      CHECK(report.passed("cbar_half_even"));
      CHECK(report.passed("cbar_half_non_increasing"));
      CHECK(report.passed("cbar_monotone_eta_high"));
      CHECK(report.passed("cbar_monotone_eta_low"));
      CHECK(report.passed("endpoint_rule"));
      CHECK_FALSE(report.passed("convex"));
      CHECK(report.declared_consistent(MarginLoss::rho_margin(rho).props()));
    }
  }

  SUBCASE("hinge: convex but not quasi-concave-even") {
    const auto report = verify_loss_properties(MarginLoss::hinge(), grid);
    CHECK(report.passed("convex"));
    CHECK(report.passed("non_increasing"));
    CHECK_FALSE(report.passed("bounded_flat_tails"));
    CHECK_FALSE(report.passed("cbar_unimodal"));
    CHECK_FALSE(report.passed("endpoint_rule"));
  }

  SUBCASE("exponential: convex and non-increasing") {
    const auto report = verify_loss_properties(MarginLoss::exponential(), grid);
    CHECK(report.passed("convex"));
    CHECK(report.passed("non_increasing"));
  }

  SUBCASE("zero-one: bounded, monotone, quasi-concave-even family checks") {
    const auto report = verify_loss_properties(MarginLoss::zero_one(), grid);
    CHECK(report.passed("non_increasing"));
    CHECK(report.passed("bounded_flat_tails"));
    CHECK(report.passed("cbar_unimodal"));
    CHECK(report.passed("cbar_half_even"));
  }
}

TEST_CASE("conditional risk symmetry and monotonicity") {
  for (double rho : {0.5, 1.0, 2.0}) {
    const MarginLoss phi = MarginLoss::rho_margin(rho);
    const auto ts = linspace(0.0, 3.0, 301);
    // evenness at eta = 1/2, exactly
    for (double t : ts) CHECK(cbar(phi, t, 0.5) == cbar(phi, -t, 0.5));
    // one-sided monotonicity for eta above 1/2
    for (double eta : {0.6, 0.8, 1.0}) {
      for (std::size_t i = 1; i < ts.size(); ++i)
        CHECK(cbar(phi, ts[i - 1], eta) >= cbar(phi, ts[i], eta) - 1e-12);
    }
  }
}

TEST_CASE("custom tables verify their declarations") {
  // A declared-convex table that is actually concave must be rejected.
  LossProps bogus;
  bogus.convex = true;
  CHECK_THROWS_AS(
      MarginLoss::custom_table({{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, bogus),
      InvalidLossError);

  // A table replica of the ramp passes the same checks as the built-in.
  LossProps ramp_props;
  ramp_props.non_increasing = true;
  ramp_props.bounded = true;
  ramp_props.continuous = true;
  ramp_props.quasi_concave_even = true;
  const MarginLoss table = MarginLoss::custom_table(
      {{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.0}}, ramp_props);
  CHECK(table(0.5) == doctest::Approx(0.5));
  CHECK(table(-5.0) == 1.0);  // constant extrapolation
  CHECK(table(5.0) == 0.0);
  CHECK(table(3.0) == 0.0);

  CHECK_THROWS_AS(MarginLoss::custom_table({{0.0, 1.0}}, {}), InvalidLossError);
  CHECK_THROWS_AS(MarginLoss::custom_table({{0.0, 1.0}, {0.0, 0.5}}, {}),
                  InvalidLossError);
  CHECK_THROWS_AS(MarginLoss::custom_table({{0.0, -1.0}, {1.0, 0.0}}, {}),
                  InvalidLossError);
}
