#include "fracture/potential.hpp"

#include "fracture/stochastic.hpp"

namespace fracture {

void WosConfig::validate(bool with_obstacle) const {
  if (!(eps_shell > 0.0)) throw std::invalid_argument("eps_shell must be positive");
  if (!(eps_tube > 0.0)) throw std::invalid_argument("eps_tube must be positive");
  if (launch_radius < 0.0) throw std::invalid_argument("launch_radius must be positive (or 0 for automatic)");
  if (max_jumps == 0) throw std::invalid_argument("max_jumps must be positive");
  if (with_obstacle && eps_shell > eps_tube / 4.0)
    throw std::invalid_argument("eps_shell must not exceed eps_tube / 4");
}

double wos_exit_time_sample(const Point3& x, const CylinderSpec& domain, const TracePolyline* trace,
                            const WosConfig& cfg, RngStream& rng) {
  if (trace == nullptr) return wos_exit_time_sample(x, domain, NoObstacle{}, cfg, rng);
  return wos_exit_time_sample(x, domain, TubeObstacle{trace, cfg.eps_tube}, cfg, rng);
}

Estimate torsion_value(const Point3& x, const CylinderSpec& domain, const TracePolyline* trace,
                       const WosConfig& cfg, std::size_t n, const RngStream& rng, Workers workers) {
  cfg.validate(trace != nullptr);
  if (trace == nullptr) return torsion_value(x, domain, NoObstacle{}, cfg, n, rng, workers);
  return torsion_value(x, domain, TubeObstacle{trace, cfg.eps_tube}, cfg, n, rng, workers);
}

double cylinder_torsion_sample(const Point3& x, const CylinderSpec& domain, const WosConfig& cfg,
                               RngStream& rng) {
  if (!contains(x, domain)) return 0.0;
  if (!domain.is_finite()) return 0.25 * (domain.radius * domain.radius - x.tail<2>().squaredNorm());
  return walk_on_spheres(x, domain, NoObstacle{}, cfg, rng).time;
}

double torsion_difference_sample(const Point3& x, const CylinderSpec& domain, const TracePolyline& trace,
                                 const WosConfig& cfg, RngStream& rng) {
  if (!contains(x, domain)) return 0.0;
  const TubeObstacle tube{&trace, cfg.eps_tube};
  if (tube.distance(x) <= 0.0) return cylinder_torsion_sample(x, domain, cfg, rng);
  const WalkResult w = walk_on_spheres(x, domain, tube, cfg, rng);
  if (w.end != WalkEnd::kObstacle) return 0.0;
  return cylinder_torsion_sample(w.position, domain, cfg, rng);
}

namespace {

Point3 uniform_in_box(const CylinderSpec& domain, double lo, double hi, RngStream& rng) {
  const double u = lo + (hi - lo) * rng.uniform();
  const Point2 p = rng.uniform_disc(domain.radius);
  return {u, p.x(), p.y()};
}

}  // namespace

Estimate fractured_rigidity(const CylinderSpec& domain, const TracePolyline& trace, const WosConfig& cfg,
                            std::size_t n_points, std::size_t n_walks, const RngStream& rng,
                            Workers workers) {
  cfg.validate(true);
  if (!domain.is_finite()) throw std::invalid_argument("fractured_rigidity needs a finite cylinder");
  if (n_points == 0 || n_walks == 0) throw std::invalid_argument("n_points and n_walks must be positive");
  const TubeObstacle tube{&trace, cfg.eps_tube};
  std::vector<double> per_point(n_points);
  parallel_for(n_points, workers, [&](std::size_t i) {
    RngStream r = rng.substream(i);
    const Point3 x = uniform_in_box(domain, -domain.half_length(), domain.half_length(), r);
    if (tube.distance(x) <= 0.0) {
      per_point[i] = 0.0;
      return;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n_walks; ++k) sum += walk_on_spheres(x, domain, tube, cfg, r).time;
    per_point[i] = sum / static_cast<double>(n_walks);
  });
  return summarize(per_point).estimate(rng.seed(), domain.volume());
}

Estimate torsion_difference_integral(const CylinderSpec& domain, const TracePolyline& trace, double x1_lo,
                                     double x1_hi, const WosConfig& cfg, std::size_t n_points,
                                     const RngStream& rng, Workers workers) {
  cfg.validate(true);
  if (!(x1_hi > x1_lo)) throw std::invalid_argument("empty integration window");
  if (n_points == 0) throw std::invalid_argument("n_points must be positive");
  std::vector<double> h(n_points);
  parallel_for(n_points, workers, [&](std::size_t i) {
    RngStream r = rng.substream(i);
    const Point3 x = uniform_in_box(domain, x1_lo, x1_hi, r);
    h[i] = torsion_difference_sample(x, domain, trace, cfg, r);
  });
  const double box = std::numbers::pi * domain.radius * domain.radius * (x1_hi - x1_lo);
  return summarize(h).estimate(rng.seed(), box);
}

double launch_radius_for(const TracePolyline& trace, const WosConfig& cfg) {
  if (cfg.launch_radius > 0.0) return cfg.launch_radius;
  return trace.circumscribed_radius(trace.vertices().front()) + 2.0 * cfg.eps_tube;
}

Estimate capacity_estimate(const TracePolyline& trace, const WosConfig& cfg, std::size_t n,
                           const RngStream& rng, Workers workers) {
  cfg.validate(true);
  const Point3 center = trace.vertices().front();
  const double rho = launch_radius_for(trace, cfg);
  if (!(rho > trace.circumscribed_radius(center) + cfg.eps_tube))
    throw std::invalid_argument("launch_radius must enclose the tube");
  return capacity_estimate(TubeObstacle{&trace, cfg.eps_tube}, center, rho, cfg, n, rng, workers);
}

KappaEstimate kappa_estimate(const WosConfig& cfg, std::size_t n_traces, std::size_t n_walkers,
                             const RngStream& rng, double ball_radius, Workers workers) {
  cfg.validate(true);
  if (n_traces == 0 || n_walkers == 0) throw std::invalid_argument("n_traces and n_walkers must be positive");
  const BallSpec ball(Point3::Zero(), ball_radius);
  const PathConfig path = PathConfig::for_radius(ball_radius);
  const double eps0 = cfg.eps_tube;
  // The launch sphere must enclose both tubes; ball radius + 2 * (2 eps0) does.
  const double rho = cfg.launch_radius > 0.0 ? cfg.launch_radius : ball_radius + 4.0 * eps0;
  std::vector<double> c1(n_traces), c2(n_traces);
  parallel_for(n_traces, workers, [&](std::size_t i) {
    const RngStream item = rng.substream(i);
    RngStream path_rng = item.substream(0);
    const TracePolyline trace = sample_trace(ball.center, ball, path, path_rng);
    const RngStream walkers = item.substream(1);
    WosConfig a = cfg;
    WosConfig b = cfg;
    b.eps_tube = 2.0 * eps0;
    c1[i] = capacity_estimate(TubeObstacle{&trace, a.eps_tube}, ball.center, rho, a, n_walkers, walkers).mean;
    c2[i] = capacity_estimate(TubeObstacle{&trace, b.eps_tube}, ball.center, rho, b, n_walkers, walkers).mean;
  });
  std::vector<double> ex(n_traces);
  for (std::size_t i = 0; i < n_traces; ++i) ex[i] = 2.0 * c1[i] - c2[i];
  KappaEstimate k;
  k.ball_radius = ball_radius;
  k.eps0 = eps0;
  k.at_eps0 = summarize(c1).estimate(rng.seed());
  k.at_2eps0 = summarize(c2).estimate(rng.seed());
  k.extrapolated = summarize(ex).estimate(rng.seed());
  return k;
}

}  // namespace fracture
