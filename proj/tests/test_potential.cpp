#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracture/potential.hpp"
#include "fracture/spectral.hpp"
#include "fracture/stochastic.hpp"
#include "oracles/oracles.hpp"

using namespace fracture;
using std::numbers::pi;

namespace {

TracePolyline sample_cylinder_trace(std::uint64_t seed) {
  const CylinderSpec c(1.0, 4.0);
  RngStream rng(seed, 0);
  return sample_trace(Point3::Zero(), c, PathConfig{}, rng);
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("config validation") {
  WosConfig cfg;
  CHECK_NOTHROW(cfg.validate(false));
  cfg.eps_shell = 0.01;
  cfg.eps_tube = 0.02;
  CHECK_THROWS_AS(cfg.validate(true), std::invalid_argument);
  CHECK_NOTHROW(cfg.validate(false));
  cfg.eps_shell = 0.0;
  CHECK_THROWS(cfg.validate(false));
}

TEST_CASE("torsion of the infinite cylinder") {
  const auto c = CylinderSpec::infinite(1.0);
  WosConfig cfg;
  for (const Point3 x : {Point3(0, 0, 0), Point3(5, 0.5, 0), Point3(-2, 0.3, -0.6)}) {
    const Estimate e = torsion_value(x, c, nullptr, cfg, 20000, RngStream(1, 0));
    const double exact = 0.25 * (1.0 - x.tail<2>().squaredNorm());
    CHECK(std::abs(e.mean - exact) < 4.0 * e.std_error + 2.0 * cfg.eps_shell);
  }
}

TEST_CASE("torsion of a spherical shell") {
  const BallSpec ball(Point3::Zero(), 1.0);
  const BallObstacle core{Point3::Zero(), 0.3};
  WosConfig cfg;
  cfg.eps_shell = 1e-4;
  for (double r : {0.4, 0.6, 0.85}) {
    const Estimate e = torsion_value(Point3(0, r, 0), ball, core, cfg, 20000, RngStream(2, 0));
    CHECK(std::abs(e.mean - oracle::shell_torsion(r, 0.3, 1.0)) < 4.0 * e.std_error + 1e-3);
  }
  CHECK(torsion_value(Point3(0.1, 0, 0), ball, core, cfg, 10, RngStream(2, 0)).mean == 0.0);
}

TEST_CASE("coupled difference matches separate estimates") {
  const auto c = CylinderSpec::infinite(1.0);
  const TracePolyline trace = sample_cylinder_trace(3);
  WosConfig cfg;
  cfg.eps_shell = 1e-3;
  cfg.eps_tube = 0.02;
  for (const Point3 x : {Point3(0.1, 0.2, 0.0), Point3(-0.3, -0.4, 0.3)}) {
    RunningStats h;
    const RngStream root(4, 0);
    for (std::size_t i = 0; i < 20000; ++i) {
      RngStream r = root.substream(i);
      h.add(torsion_difference_sample(x, c, trace, cfg, r));
    }
    const Estimate direct = torsion_value(x, c, &trace, cfg, 20000, RngStream(5, 0));
    const double exact = 0.25 * (1.0 - x.tail<2>().squaredNorm());
    const Estimate diff{exact - direct.mean, direct.std_error, direct.n, 0};
    CHECK(z_score(h.estimate(4), diff) < 4.0);
  }
  // Inside the tube the difference is the obstacle-free torsion.
  RngStream r(6, 0);
  const Point3 on = trace.vertices()[trace.size() / 2];
  CHECK(torsion_difference_sample(on, c, trace, cfg, r) ==
        doctest::Approx(0.25 * (1.0 - on.tail<2>().squaredNorm())));
  CHECK(torsion_difference_sample(Point3(0, 2, 0), c, trace, cfg, r) == 0.0);
}

TEST_CASE("fractured rigidity lies below the intact one") {
  const CylinderSpec c(1.0, 4.0);
  const TracePolyline trace = sample_cylinder_trace(7);
  WosConfig cfg;
  cfg.eps_shell = 2e-3;
  const Estimate f = fractured_rigidity(c, trace, cfg, 2000, 4, RngStream(8, 0));
  CHECK(f.mean > 0.0);
  CHECK(f.lower() < spectral::rigidity_cylinder(4.0, 1.0).value);
  const auto [lo, hi] = trace.axial_extent();
  const Estimate d = torsion_difference_integral(c, trace, lo - 2.0, hi + 2.0, cfg, 4000, RngStream(9, 0));
  CHECK(d.mean > 0.0);
}

TEST_CASE("capacity of a ball") {
  WosConfig cfg;
  cfg.eps_shell = 1e-3;
  const BallObstacle ball{Point3(0.1, 0.2, 0.3), 0.5};
  const Estimate near = capacity_estimate(ball, ball.center, 0.75, cfg, 20000, RngStream(10, 0));
  const Estimate far = capacity_estimate(ball, ball.center, 1.5, cfg, 20000, RngStream(11, 0));
  CHECK(near.mean == doctest::Approx(2.0 * pi).epsilon(0.03));
  CHECK(z_score(near, far) < 4.0);
}

TEST_CASE("capacity of the tube around a single point") {
  const TracePolyline point({Point3(1, 1, 1), Point3(1, 1, 1)}, 1e-4);
  WosConfig cfg;
  cfg.eps_tube = 0.2;
  cfg.eps_shell = 1e-3;
  const Estimate e = capacity_estimate(point, cfg, 20000, RngStream(12, 0));
  CHECK(e.mean == doctest::Approx(4.0 * pi * 0.2).epsilon(0.03));
  CHECK(launch_radius_for(point, cfg) == doctest::Approx(0.4));
}

TEST_CASE("estimates do not depend on the worker count") {
  const auto c = CylinderSpec::infinite(1.0);
  const TracePolyline trace = sample_cylinder_trace(13);
  const WosConfig cfg;
  const Estimate a = torsion_value(Point3(0.2, 0.1, 0), c, &trace, cfg, 500, RngStream(14, 0), Workers{1});
  const Estimate b = torsion_value(Point3(0.2, 0.1, 0), c, &trace, cfg, 500, RngStream(14, 0), Workers{4});
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("kappa at a small budget") {
  WosConfig cfg;
  cfg.eps_tube = 0.02;
  cfg.eps_shell = 0.005;
  const KappaEstimate k = kappa_estimate(cfg, 6, 200, RngStream(15, 0));
  CHECK(k.at_eps0.mean > 0.0);
  CHECK(k.at_eps0.mean < 4.0 * pi * (1.0 + 4.0 * cfg.eps_tube));
  CHECK(k.at_2eps0.mean > k.at_eps0.lower());
  CHECK(k.extrapolated.mean == doctest::Approx(2.0 * k.at_eps0.mean - k.at_2eps0.mean));
  CHECK(k.eps0 == 0.02);
}

TEST_CASE("walk budget") {
  WosConfig cfg;
  cfg.max_jumps = 1;
  RngStream r(16, 0);
  CHECK_THROWS_AS(walk_on_spheres(Point3::Zero(), CylinderSpec::infinite(1.0), NoObstacle{}, cfg, r),
                  WosBudgetExceeded);
}

}
