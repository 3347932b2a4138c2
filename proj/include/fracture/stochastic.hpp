#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracture/geometry.hpp"
#include "fracture/parallel.hpp"
#include "fracture/rng.hpp"
#include "fracture/statistics.hpp"

// Brownian paths with generator Delta: every coordinate of an Euler step of
// length dt is N(0, 2 dt).

namespace fracture {

struct PathConfig {
  double dt = 1e-4;
  std::size_t max_steps = 10'000'000;

  /// dt = 1e-4 R^2 for a domain of radius R.
  static PathConfig for_radius(double radius) { return {1e-4 * radius * radius}; }

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  }
};

/// Thrown when a path has not left its domain after max_steps steps.
class PathBudgetExceeded : public std::runtime_error {
 public:
  PathBudgetExceeded(std::vector<Point3> partial, double dt)
      : std::runtime_error("path exceeded max_steps before leaving the domain"),
        partial_(std::move(partial)),
        dt_(dt) {}

  const std::vector<Point3>& partial_path() const { return partial_; }
  double dt() const { return dt_; }

 private:
  std::vector<Point3> partial_;
  double dt_;
};

/// Euler path from `start` until the first sampled position outside the
/// domain; that last vertex is pulled back onto the boundary along the final
/// segment. The number of steps times dt is the discrete exit time.
TracePolyline sample_trace(const Point3& start, const CylinderSpec& domain, const PathConfig& cfg,
                           RngStream& rng);
TracePolyline sample_trace(const Point3& start, const BallSpec& domain, const PathConfig& cfg,
                           RngStream& rng);

/// Exit time implied by a sampled trace.
inline double trace_exit_time(const TracePolyline& t) {
  return t.step_dt() * static_cast<double>(t.size() - 1);
}

enum class StartMode { kUniformCylinder, kAxis, kCenter };

/// kUniformCylinder: uniform in C_{L,R}. kAxis: (u, 0, 0), u uniform on the
/// axis. kCenter: the origin. The first two need a finite cylinder.
Point3 sample_start(StartMode mode, const CylinderSpec& domain, RngStream& rng);
/// Only kCenter is meaningful for a ball.
Point3 sample_start(StartMode mode, const BallSpec& domain, RngStream& rng);

/// Lateral exit time of the two-dimensional component started at y' in D_R,
/// by Euler steps of size dt.
double sample_lateral_exit_time(const Point2& start, double radius, double dt, RngStream& rng);

struct RangeStatistics {
  Estimate mean_range;
  Estimate mean_squared_range;
};

/// Range max - min over [0, t] of n one-dimensional paths (Euler, step dt).
/// Path i draws from rng.substream(i).
RangeStatistics range_statistics(double t, std::size_t n, const PathConfig& cfg, const RngStream& rng,
                                 Workers workers = {});

}  // namespace fracture
