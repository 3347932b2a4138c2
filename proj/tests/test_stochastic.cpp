#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracture/stochastic.hpp"
#include "oracles/oracles.hpp"

using namespace fracture;

TEST_SUITE("stochastic") {

TEST_CASE("trace ends on the boundary") {
  const CylinderSpec c(1.0, 4.0);
  RngStream rng(1, 0);
  for (int i = 0; i < 50; ++i) {
    const Point3 x0 = sample_start(StartMode::kUniformCylinder, c, rng);
    const TracePolyline t = sample_trace(x0, c, PathConfig{}, rng);
    REQUIRE(t.size() >= 2);
    CHECK(t.vertices().front() == x0);
    CHECK(std::abs(dist_to_boundary(t.vertices().back(), c)) < 1e-12);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) REQUIRE(contains(t.vertices()[k], c));
  }
  const BallSpec b(Point3::Zero(), 0.5);
  const TracePolyline tb = sample_trace(Point3::Zero(), b, PathConfig::for_radius(0.5), rng);
  CHECK(std::abs(dist_to_boundary(tb.vertices().back(), b)) < 1e-12);
}

TEST_CASE("start samplers") {
  const CylinderSpec c(2.0, 6.0);
  RngStream rng(2, 0);
  RunningStats r2;
  for (int i = 0; i < 20000; ++i) {
    const Point3 a = sample_start(StartMode::kAxis, c, rng);
    REQUIRE(a.tail<2>().norm() == 0.0);
    REQUIRE(std::abs(a.x()) < 3.0);
    const Point3 u = sample_start(StartMode::kUniformCylinder, c, rng);
    REQUIRE(contains(u, c));
    r2.add(u.tail<2>().squaredNorm());
  }
  CHECK(r2.mean() == doctest::Approx(2.0).epsilon(0.02));
  CHECK(sample_start(StartMode::kCenter, c, rng) == Point3::Zero());
  CHECK_THROWS(sample_start(StartMode::kAxis, CylinderSpec::infinite(1.0), rng));
}

TEST_CASE("mean exit time from the ball center") {
  const BallSpec b(Point3::Zero(), 1.0);
  RngStream rng(3, 0);
  RunningStats s;
  for (int i = 0; i < 4000; ++i) s.add(trace_exit_time(sample_trace(Point3::Zero(), b, PathConfig{}, rng)));
  // E tau = (R^2 - |x|^2) / 6 for generator Delta; Euler overshoot adds O(sqrt dt).
  CHECK(std::abs(s.mean() - 1.0 / 6.0) < 4.0 * s.std_error() + 0.01);
}

TEST_CASE("lateral exit time") {
  RngStream rng(4, 0);
  RunningStats s;
  for (int i = 0; i < 4000; ++i) s.add(sample_lateral_exit_time(Point2::Zero(), 1.0, 1e-4, rng));
  CHECK(std::abs(s.mean() - 0.25) < 4.0 * s.std_error() + 0.01);
  RunningStats off;
  for (int i = 0; i < 4000; ++i) off.add(sample_lateral_exit_time(Point2(0.6, 0.0), 1.0, 1e-4, rng));
  CHECK(std::abs(off.mean() - 0.16) < 4.0 * off.std_error() + 0.01);
}

TEST_CASE("expected range") {
  const auto r = range_statistics(1.0, 2000, PathConfig{}, RngStream(5, 0));
  CHECK(std::abs(r.mean_range.mean - oracle::mean_range(1.0)) < 3.0 * r.mean_range.std_error + 0.02);
  CHECK(r.mean_range.n == 2000);
}

TEST_CASE("range does not depend on the worker count") {
  const PathConfig cfg{1e-3};
  const auto a = range_statistics(0.5, 300, cfg, RngStream(6, 0), Workers{1});
  const auto b = range_statistics(0.5, 300, cfg, RngStream(6, 0), Workers{3});
  CHECK(a.mean_range.mean == b.mean_range.mean);
  CHECK(a.mean_squared_range.std_error == b.mean_squared_range.std_error);
}

TEST_CASE("step budget") {
  PathConfig cfg{1e-4, 10};
  RngStream rng(7, 0);
  try {
    (void)sample_trace(Point3::Zero(), BallSpec(Point3::Zero(), 1.0), cfg, rng);
    FAIL("expected PathBudgetExceeded");
  } catch (const PathBudgetExceeded& e) {
    CHECK(e.partial_path().size() == 11);
    CHECK(e.dt() == 1e-4);
  }
  CHECK_THROWS(PathConfig{0.0}.validate());
}

}
