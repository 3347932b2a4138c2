#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracture/experiments.hpp"
#include "fracture/spectral.hpp"
#include "oracles/oracles.hpp"

using namespace fracture;

namespace {

double ierfc(double z) { return std::exp(-z * z) / std::sqrt(std::numbers::pi) - z * std::erfc(z); }

Budgets tiny() {
  Budgets b = Budgets::small();
  b.n_traces = 8;
  b.n_points = 200;
  return b;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("named budgets") {
  CHECK(Budgets::named("default").n_traces == Budgets{}.n_traces);
  CHECK(Budgets::named("small").n_traces < Budgets::named("large").n_traces);
  CHECK_THROWS_AS(Budgets::named("huge"), std::invalid_argument);
  Budgets b;
  CHECK_NOTHROW(b.validate());
  b.eps_shell = b.eps_tube;
  CHECK_THROWS(b.validate());
  b = Budgets{};
  b.window = 0.0;
  CHECK_THROWS(b.validate());
  CHECK(Budgets{}.wos(2.0).eps_tube == doctest::Approx(2.0 * Budgets{}.eps_tube));
  CHECK(std::string(to_string(LossMode::kAxis)) == "axis");
  CHECK(std::string(to_string(ConstantMode::kCPrime)) == "cprime");
}

TEST_CASE("window bias bound") {
  // Substituting t = s^2 makes the integrand smooth at the origin.
  for (double W : {2.0, 4.0, 6.0}) {
    const double quad = oracle::simpson(
        [&](double s) {
          if (s == 0.0) return 0.0;
          const double t = s * s;
          return 2.0 * 2.0 * s * ierfc(W / (2.0 * s)) * spectral::disc_heat_content(t, 1.0).value * 2.0 * s;
        },
        0.0, 20.0, 20000);
    CHECK(window_bias_bound(W, 1.0) == doctest::Approx(quad).epsilon(1e-5));
  }
  CHECK(window_bias_bound(6.0, 1.0) == doctest::Approx(1.709e-7).epsilon(1e-3));
  CHECK(window_bias_bound(3.0, 1.0) > window_bias_bound(4.0, 1.0));
  CHECK_THROWS(window_bias_bound(0.0, 1.0));
}

TEST_CASE("plane hitting stays below its bound") {
  const PlaneHittingResult p = lemma32_check(16.0, 1.0, 4000, RngStream(1, 0));
  CHECK(p.bound == doctest::Approx(spectral::plane_hitting_bound(16.0, 1.0)));
  CHECK(p.probability.mean >= 0.0);
  CHECK(p.probability.upper() <= p.bound);
  CHECK(p.entry().pass);
  const PlaneHittingResult q = lemma32_check(16.0, 1.0, 4000, RngStream(1, 0), Workers{3});
  CHECK(q.probability.mean == p.probability.mean);
  // Starting on the end plane region raises the probability: shorter cylinders do worse.
  const PlaneHittingResult s = lemma32_check(4.0, 1.0, 4000, RngStream(2, 0));
  CHECK(s.probability.mean > p.probability.mean);
}

TEST_CASE("loss estimate is bounded and reproducible") {
  const Budgets b = tiny();
  const LossEstimate a = estimate_loss(12.0, 1.0, LossMode::kUniform, b, RngStream(3, 0));
  CHECK(a.exact == doctest::Approx(spectral::rigidity_cylinder(12.0, 1.0).value));
  CHECK(a.value.mean >= 0.0);
  CHECK(a.value.lower() <= spectral::loss_upper_bound(1.0));
  CHECK(a.fractured.mean == doctest::Approx(a.exact - a.value.mean));
  CHECK(a.value.n == b.n_traces);
  const LossEstimate c = estimate_loss(12.0, 1.0, LossMode::kUniform, b, RngStream(3, 0), Workers{2});
  CHECK(c.value.mean == a.value.mean);
  const LossEstimate axis = estimate_loss(12.0, 1.0, LossMode::kAxis, b, RngStream(3, 0));
  CHECK(axis.value.mean > 0.0);
  CHECK_THROWS(estimate_loss(-1.0, 1.0, LossMode::kUniform, b, RngStream(3, 0)));
}

TEST_CASE("loss scales with the radius") {
  // Brownian scaling: the loss of C_{L R, R} is R^5 times that of C_{L, 1}
  // when every length in the budget scales too; same seed gives the same paths.
  const Budgets b = tiny();
  const LossEstimate one = estimate_loss(8.0, 1.0, LossMode::kUniform, b, RngStream(4, 0));
  const LossEstimate two = estimate_loss(16.0, 2.0, LossMode::kUniform, b, RngStream(4, 0));
  CHECK(two.value.mean == doctest::Approx(32.0 * one.value.mean).epsilon(1e-6));
}

TEST_CASE("constant estimate at a small budget") {
  Budgets b = tiny();
  b.l_trunc = 20.0;
  const ConstantEstimate c = estimate_constant(ConstantMode::kC, b, RngStream(5, 0));
  CHECK(c.value.mean > 0.0);
  CHECK(c.value.lower() <= spectral::bound_constants().c_upper);
  CHECK(c.truncation_bound == doctest::Approx(spectral::plane_hitting_bound(20.0, 1.0)));
  const ConstantEstimate cp = estimate_constant(ConstantMode::kCPrime, b, RngStream(5, 0));
  CHECK(cp.value.lower() <= spectral::bound_constants().cp_upper);
}

}
