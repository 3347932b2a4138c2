#include "fracture/stochastic.hpp"

#include <algorithm>
#include <cmath>

namespace fracture {

namespace {

template <typename Domain>
TracePolyline sample_trace_impl(const Point3& start, const Domain& domain, const PathConfig& cfg,
                                RngStream& rng) {
  cfg.validate();
  if (!contains(start, domain)) throw std::invalid_argument("trace start must lie inside the domain");
  const double sigma = std::sqrt(2.0 * cfg.dt);
  std::vector<Point3> path;
  path.reserve(1024);
  path.push_back(start);
  Point3 x = start;
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    const Point3 next = x + sigma * rng.normal3();
    if (!contains(next, domain)) {
      const double s = exit_fraction(x, next, domain);
      path.push_back(x + s * (next - x));
      return TracePolyline(std::move(path), cfg.dt);
    }
    path.push_back(next);
    x = next;
  }
  throw PathBudgetExceeded(std::move(path), cfg.dt);
}

}  // namespace

TracePolyline sample_trace(const Point3& start, const CylinderSpec& domain, const PathConfig& cfg,
                           RngStream& rng) {
  return sample_trace_impl(start, domain, cfg, rng);
}

TracePolyline sample_trace(const Point3& start, const BallSpec& domain, const PathConfig& cfg,
                           RngStream& rng) {
  return sample_trace_impl(start, domain, cfg, rng);
}

Point3 sample_start(StartMode mode, const CylinderSpec& domain, RngStream& rng) {
  if (mode == StartMode::kCenter) return Point3::Zero();
  if (!domain.is_finite()) throw std::invalid_argument("uniform and axis starts need a finite cylinder");
  const double u = (rng.uniform() - 0.5) * domain.length;
  if (mode == StartMode::kAxis) return {u, 0.0, 0.0};
  const Point2 p = rng.uniform_disc(domain.radius);
  return {u, p.x(), p.y()};
}

Point3 sample_start(StartMode mode, const BallSpec& domain, RngStream&) {
  if (mode != StartMode::kCenter) throw std::invalid_argument("balls support only the center start");
  return domain.center;
}

double sample_lateral_exit_time(const Point2& start, double radius, double dt, RngStream& rng) {
  if (!(start.norm() < radius)) return 0.0;
  const double sigma = std::sqrt(2.0 * dt);
  const double r2 = radius * radius;
  Point2 x = start;
  std::size_t steps = 0;
  do {
    x.x() += sigma * rng.normal();
    x.y() += sigma * rng.normal();
    ++steps;
  } while (x.squaredNorm() < r2);
  return dt * static_cast<double>(steps);
}

RangeStatistics range_statistics(double t, std::size_t n, const PathConfig& cfg, const RngStream& rng,
                                 Workers workers) {
  cfg.validate();
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (n == 0) throw std::invalid_argument("n must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(t / cfg.dt));
  const double sigma = std::sqrt(2.0 * t / static_cast<double>(std::max<std::size_t>(steps, 1)));
  std::vector<double> range(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream r = rng.substream(i);
    double x = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      x += sigma * r.normal();
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    range[i] = hi - lo;
  });
  RunningStats first, second;
  for (double v : range) {
    first.add(v);
    second.add(v * v);
  }
  return {first.estimate(rng.seed()), second.estimate(rng.seed())};
}

}  // namespace fracture
