#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Geometry>

#include "fracture/geometry.hpp"
#include "fracture/parallel.hpp"
#include "fracture/rng.hpp"
#include "fracture/statistics.hpp"

namespace fracture {

struct WosConfig {
  /// Absorption distance to the domain boundary or the obstacle surface.
  double eps_shell = 1e-3;
  /// Thickening radius of the trace obstacle.
  double eps_tube = 0.02;
  /// Capacity launch radius; 0 selects circumscribed radius + 2 eps_tube.
  double launch_radius = 0.0;
  std::size_t max_jumps = 1'000'000;

  void validate(bool with_obstacle) const;
};

class WosBudgetExceeded : public std::runtime_error {
 public:
  WosBudgetExceeded() : std::runtime_error("walk-on-spheres exceeded max_jumps (eps_shell too small?)") {}
};

// Obstacles expose the signed distance to their surface (negative inside).
template <typename T>
concept Obstacle = requires(const T& o, const Point3& x) {
  { o.distance(x) } -> std::convertible_to<double>;
};

struct NoObstacle {
  double distance(const Point3&) const { return std::numeric_limits<double>::infinity(); }
};

/// Closed eps-neighbourhood of a trace.
struct TubeObstacle {
  const TracePolyline* trace;
  double eps;
  double distance(const Point3& x) const { return trace->distance(x) - eps; }
};

struct BallObstacle {
  Point3 center;
  double radius;
  double distance(const Point3& x) const { return (x - center).norm() - radius; }
};

/// Unbounded domain used by the capacity walk.
struct FreeSpace {};
inline double dist_to_boundary(const Point3&, const FreeSpace&) {
  return std::numeric_limits<double>::infinity();
}

enum class WalkEnd { kDomain, kObstacle };

struct WalkResult {
  /// Accumulated sum of r^2 / 6 over the jumps, an exit-time sample.
  double time = 0.0;
  WalkEnd end = WalkEnd::kDomain;
  Point3 position = Point3::Zero();
  std::size_t jumps = 0;
};

/// Walk on spheres from x until within eps_shell of the domain boundary or
/// the obstacle surface. Each jump has the radius of the largest ball clear of
/// both and contributes r^2/6, the mean exit time of that ball from its center
/// for generator Delta in three dimensions.
///
/// Obstacle distances are 1-Lipschitz, so after a jump of radius r the old
/// distance minus r stays a valid lower bound and the query is skipped while
/// that bound exceeds the domain distance.
template <typename Domain, Obstacle Obs>
WalkResult walk_on_spheres(Point3 x, const Domain& domain, const Obs& obstacle, const WosConfig& cfg,
                           RngStream& rng) {
  WalkResult out;
  double obstacle_lb = -std::numeric_limits<double>::infinity();
  for (;;) {
    const double d_dom = dist_to_boundary(x, domain);
    if (d_dom < cfg.eps_shell) {
      out.end = WalkEnd::kDomain;
      break;
    }
    if (obstacle_lb < d_dom) obstacle_lb = obstacle.distance(x);
    if (obstacle_lb < cfg.eps_shell) {
      out.end = WalkEnd::kObstacle;
      break;
    }
    const double r = std::min(d_dom, obstacle_lb);
    if (++out.jumps > cfg.max_jumps) throw WosBudgetExceeded();
    out.time += r * r / 6.0;
    x += r * rng.unit_sphere();
    obstacle_lb -= r;
  }
  out.position = x;
  return out;
}

/// One sample of the torsion function of domain minus obstacle at x. Points in
/// the obstacle give 0.
template <typename Domain, Obstacle Obs>
double wos_exit_time_sample(const Point3& x, const Domain& domain, const Obs& obstacle,
                            const WosConfig& cfg, RngStream& rng) {
  if (obstacle.distance(x) <= 0.0 || !contains(x, domain)) return 0.0;
  return walk_on_spheres(x, domain, obstacle, cfg, rng).time;
}

/// Untyped entry points: `trace` may be null for no obstacle.
double wos_exit_time_sample(const Point3& x, const CylinderSpec& domain, const TracePolyline* trace,
                            const WosConfig& cfg, RngStream& rng);

/// Mean and SE of n samples; sample i uses rng.substream(i).
Estimate torsion_value(const Point3& x, const CylinderSpec& domain, const TracePolyline* trace,
                       const WosConfig& cfg, std::size_t n, const RngStream& rng, Workers workers = {});

template <typename Domain, Obstacle Obs>
Estimate torsion_value(const Point3& x, const Domain& domain, const Obs& obstacle, const WosConfig& cfg,
                       std::size_t n, const RngStream& rng, Workers workers = {}) {
  std::vector<double> v(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream r = rng.substream(i);
    v[i] = wos_exit_time_sample(x, domain, obstacle, cfg, r);
  });
  return summarize(v).estimate(rng.seed());
}

/// Torsion function of the obstacle-free cylinder: analytic for the infinite
/// cylinder, one walk-on-spheres sample otherwise.
double cylinder_torsion_sample(const Point3& x, const CylinderSpec& domain, const WosConfig& cfg,
                               RngStream& rng);

/// One sample of h(x) = v_C(x) - v_{C \ K}(x) for the tube K around `trace`.
/// A single walk serves both torsion functions: up to absorption the r^2/6
/// increments are common to both, so the difference is the obstacle-free
/// torsion at the absorption point when the walk ends on K and 0 otherwise.
double torsion_difference_sample(const Point3& x, const CylinderSpec& domain, const TracePolyline& trace,
                                 const WosConfig& cfg, RngStream& rng);

/// |C| times the average over n_points uniform points of torsion_value with
/// n_walks walks each. Point i uses rng.substream(i).
Estimate fractured_rigidity(const CylinderSpec& domain, const TracePolyline& trace, const WosConfig& cfg,
                            std::size_t n_points, std::size_t n_walks, const RngStream& rng,
                            Workers workers = {});

/// Integral of h over the box [x1_lo, x1_hi] x D_R by uniform sampling.
Estimate torsion_difference_integral(const CylinderSpec& domain, const TracePolyline& trace, double x1_lo,
                                     double x1_hi, const WosConfig& cfg, std::size_t n_points,
                                     const RngStream& rng, Workers workers = {});

/// Hit indicator of one capacity walker launched uniformly on the sphere of
/// radius rho about `center`. Outside that sphere at distance s the walker
/// escapes with probability 1 - rho/s, otherwise it re-enters at a point drawn
/// exactly from the harmonic measure of the sphere seen from outside.
template <Obstacle Obs>
bool capacity_walker_hits(const Obs& obstacle, const Point3& center, double rho, const WosConfig& cfg,
                          RngStream& rng) {
  Point3 x = center + rho * rng.unit_sphere();
  std::size_t jumps = 0;
  for (;;) {
    const Point3 rel = x - center;
    const double s = rel.norm();
    if (s > rho * (1.0 + 1e-12)) {
      if (rng.uniform() >= rho / s) return false;
      // Inverse CDF of u = cos(angle to x) under density ~ |x - y|^-3.
      const double A = s * s + rho * rho;
      const double B = 2.0 * s * rho;
      const double w0 = 1.0 / (s + rho);
      const double w = w0 + rng.uniform() * (1.0 / (s - rho) - w0);
      const double u = std::clamp((A - 1.0 / (w * w)) / B, -1.0, 1.0);
      const Point3 e = rel / s;
      const Point3 a = (std::abs(e.x()) < 0.9 ? Point3::UnitX() : Point3::UnitY()).cross(e).normalized();
      const Point3 b = e.cross(a);
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      const double v = std::sqrt(std::max(0.0, 1.0 - u * u));
      x = center + rho * (u * e + v * (std::cos(phi) * a + std::sin(phi) * b));
      continue;
    }
    const double d = obstacle.distance(x);
    if (d < cfg.eps_shell) return true;
    if (++jumps > cfg.max_jumps) throw WosBudgetExceeded();
    x += d * rng.unit_sphere();
  }
}

template <Obstacle Obs>
Estimate capacity_estimate(const Obs& obstacle, const Point3& center, double rho, const WosConfig& cfg,
                           std::size_t n, const RngStream& rng, Workers workers = {}) {
  std::vector<double> hits(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream r = rng.substream(i);
    hits[i] = capacity_walker_hits(obstacle, center, rho, cfg, r) ? 1.0 : 0.0;
  });
  return summarize(hits).estimate(rng.seed(), 4.0 * std::numbers::pi * rho);
}

/// Capacity of the eps_tube-tube around a trace, launched about the trace's
/// first vertex.
Estimate capacity_estimate(const TracePolyline& trace, const WosConfig& cfg, std::size_t n,
                           const RngStream& rng, Workers workers = {});

/// Launch radius used for a trace: cfg.launch_radius when set, else the
/// circumscribed radius about the first vertex plus 2 eps_tube.
double launch_radius_for(const TracePolyline& trace, const WosConfig& cfg);

struct KappaEstimate {
  double ball_radius = 1.0;
  double eps0 = 0.0;
  /// Mean tube capacity at eps0 and at 2 eps0.
  Estimate at_eps0;
  Estimate at_2eps0;
  /// Per-trace linear extrapolation 2 c(eps0) - c(2 eps0) to eps = 0.
  Estimate extrapolated;
};

/// Expected capacity of the tube around a trace run from the center of
/// B(0; ball_radius) to its boundary. cfg.eps_tube is eps0; both tube radii
/// see the same trace and the same walker streams. Trace i draws its path
/// from rng.substream(i).substream(0) and its walkers from .substream(1).
KappaEstimate kappa_estimate(const WosConfig& cfg, std::size_t n_traces, std::size_t n_walkers,
                             const RngStream& rng, double ball_radius = 1.0, Workers workers = {});

}  // namespace fracture
