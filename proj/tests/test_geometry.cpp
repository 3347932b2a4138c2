#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fracture/geometry.hpp"
#include "fracture/rng.hpp"

using namespace fracture;

namespace {

TracePolyline random_walk_polyline(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<Point3> v{Point3::Zero()};
  for (std::size_t i = 1; i < n; ++i) v.push_back(v.back() + 0.05 * rng.normal3());
  return TracePolyline(v, 1e-3);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("cylinder distance and membership") {
  const CylinderSpec c(1.0, 6.0);
  CHECK(dist_to_boundary(Point3(0, 0, 0), c) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(Point3(2.5, 0, 0), c) == doctest::Approx(0.5));
  CHECK(dist_to_boundary(Point3(0, 0.6, 0.8), c) == doctest::Approx(0.0));
  CHECK(dist_to_boundary(Point3(4.0, 0, 0), c) == doctest::Approx(-1.0));
  CHECK(contains(Point3(0, 0.5, 0), c));
  CHECK_FALSE(contains(Point3(0, 1.0, 0), c));
  CHECK(c.volume() == doctest::Approx(6.0 * std::numbers::pi));

  const auto inf = CylinderSpec::infinite(2.0);
  CHECK_FALSE(inf.is_finite());
  CHECK(dist_to_boundary(Point3(1e9, 1.0, 0), inf) == doctest::Approx(1.0));
}

TEST_CASE("ball and disc distance") {
  const BallSpec b(Point3(1, 0, 0), 2.0);
  CHECK(dist_to_boundary(Point3(1, 0, 0), b) == doctest::Approx(2.0));
  CHECK(dist_to_boundary(Point3(1, 0, 3), b) == doctest::Approx(-1.0));
  CHECK(dist_to_boundary(Point2(0.3, 0.4), DiscSpec(1.0)) == doctest::Approx(0.5));
}

TEST_CASE("invalid shapes throw") {
  CHECK_THROWS_AS(CylinderSpec(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CylinderSpec(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(BallSpec(Point3::Zero(), std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(DiscSpec(-1.0), std::invalid_argument);
  CHECK_THROWS(TracePolyline({}, 1e-3));
  CHECK_THROWS(TracePolyline({Point3::Zero()}, 1e-3));
}

TEST_CASE("exit fraction lands on the boundary") {
  const CylinderSpec c(1.0, 4.0);
  const Point3 a(0, 0, 0);
  const Point3 b(0, 2.0, 0);
  const double s = exit_fraction(a, b, c);
  CHECK(s == doctest::Approx(0.5));
  const Point3 cap_b(3.0, 0, 0);
  CHECK(exit_fraction(a, cap_b, c) == doctest::Approx(2.0 / 3.0));
  const BallSpec ball(Point3::Zero(), 1.0);
  CHECK(exit_fraction(Point3(0.5, 0, 0), Point3(1.5, 0, 0), ball) == doctest::Approx(0.5));
}

TEST_CASE("segment distance") {
  const Point3 a(0, 0, 0), b(1, 0, 0);
  CHECK(squared_dist_to_segment(Point3(0.5, 1, 0), a, b) == doctest::Approx(1.0));
  CHECK(squared_dist_to_segment(Point3(-1, 0, 0), a, b) == doctest::Approx(1.0));
  CHECK(squared_dist_to_segment(Point3(3, 0, 4), a, a) == doctest::Approx(25.0));
}

TEST_CASE("BVH distance equals brute force") {
  for (std::size_t n : {2u, 3u, 7u, 300u, 5000u}) {
    const TracePolyline t = random_walk_polyline(n, n);
    RngStream q(99, n);
    for (int i = 0; i < 200; ++i) {
      const Point3 x = 1.5 * q.normal3();
      CHECK(t.distance(x) == doctest::Approx(t.brute_force_distance(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance is 1-Lipschitz") {
  const TracePolyline t = random_walk_polyline(1000, 5);
  RngStream q(3, 0);
  for (int i = 0; i < 500; ++i) {
    const Point3 x = q.normal3();
    const Point3 y = x + 0.1 * q.normal3();
    CHECK(std::abs(t.distance(x) - t.distance(y)) <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("extent, bounds and scaling") {
  const TracePolyline t({Point3(0, 0, 0), Point3(2, 1, 0), Point3(-1, 0, 3)}, 0.5);
  const auto [lo, hi] = t.axial_extent();
  CHECK(lo == -1.0);
  CHECK(hi == 2.0);
  CHECK(t.segment_count() == 2);
  CHECK(t.circumscribed_radius(Point3::Zero()) == doctest::Approx(std::sqrt(10.0)));
  CHECK(t.bounds().hi.z() == 3.0);
  const TracePolyline s = t.scaled(2.0);
  CHECK(s.step_dt() == doctest::Approx(2.0));
  CHECK(s.distance(Point3(0, 0, 2)) == doctest::Approx(2.0 * t.distance(Point3(0, 0, 1))));
}

TEST_CASE("trace round trip") {
  const TracePolyline t = random_walk_polyline(257, 11);
  for (auto fmt : {TraceFormat::kText, TraceFormat::kBinary}) {
    std::stringstream ss;
    write_trace(ss, t, fmt);
    const TracePolyline r = read_trace(ss, fmt);
    REQUIRE(r.size() == t.size());
    CHECK(r.step_dt() == t.step_dt());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(r.vertices()[i] == t.vertices()[i]);
  }
  CHECK(format_for_path("a/b.bin") == TraceFormat::kBinary);
  CHECK(format_for_path("a/b.txt") == TraceFormat::kText);
  std::stringstream bad("0.1\n1 2\n");
  CHECK_THROWS(read_trace(bad, TraceFormat::kText));
}

}
