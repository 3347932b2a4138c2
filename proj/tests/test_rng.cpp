#include <doctest.h>

#include <cmath>
#include <set>

#include "fracture/rng.hpp"
#include "fracture/statistics.hpp"

using namespace fracture;

TEST_SUITE("rng") {

// Published known-answer vectors for Philox4x32-10.
TEST_CASE("philox known answers") {
  using P = Philox4x32;
  CHECK(P::generate({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams replay and differ") {
  RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  std::set<std::uint64_t> ids;
  const RngStream root(1, 0);
  for (std::uint64_t i = 0; i < 10000; ++i) ids.insert(root.substream(i).stream_id());
  CHECK(ids.size() == 10000);
  CHECK(root.substream(5).stream_id() == RngStream(1, 0).substream(5).stream_id());
  CHECK(root.substream(1).substream(2).stream_id() != root.substream(2).substream(1).stream_id());
}

TEST_CASE("uniform moments and range") {
  RngStream r(42, 0);
  RunningStats s;
  for (int i = 0; i < 200000; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s.add(u);
  }
  CHECK(std::abs(s.mean() - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / 200000));
  CHECK(s.sample_variance() == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal moments") {
  RngStream r(43, 0);
  RunningStats s, s4;
  for (int i = 0; i < 200000; ++i) {
    const double z = r.normal();
    s.add(z);
    s4.add(z * z * z * z);
  }
  CHECK(std::abs(s.mean()) < 5.0 / std::sqrt(200000.0));
  CHECK(s.sample_variance() == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4.mean() == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("sphere and disc samplers") {
  RngStream r(44, 0);
  Point3 sum = Point3::Zero();
  RunningStats r2;
  for (int i = 0; i < 100000; ++i) {
    const Point3 p = r.unit_sphere();
    REQUIRE(p.norm() == doctest::Approx(1.0));
    sum += p;
    const Point2 q = r.uniform_disc(2.0);
    REQUIRE(q.norm() < 2.0);
    r2.add(q.squaredNorm());
  }
  CHECK((sum / 100000.0).norm() < 0.015);
  // E|q|^2 = R^2 / 2 for the uniform disc.
  CHECK(r2.mean() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("running stats merge matches sequential") {
  RngStream r(45, 0);
  RunningStats all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = r.normal() * 3.0 + 1.0;
    all.add(x);
    (i < 370 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
  CHECK(left.sample_variance() == doctest::Approx(all.sample_variance()).epsilon(1e-12));
  const Estimate a{1.0, 0.3, 10, 0}, b{2.0, 0.4, 10, 0};
  CHECK(z_score(a, b) == doctest::Approx(2.0));
  CHECK(a.upper() == doctest::Approx(1.9));
}

}
