#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fracture/parallel.hpp"
#include "fracture/potential.hpp"
#include "fracture/report.hpp"
#include "fracture/rng.hpp"
#include "fracture/statistics.hpp"

namespace fracture {

/// Monte Carlo budgets shared by the experiment drivers. Lengths (eps_tube,
/// eps_shell, window) are in units of the cylinder radius.
struct Budgets {
  std::size_t n_traces = 300;     // traces per loss / constant estimate
  std::size_t n_points = 2000;    // integration points per trace
  std::size_t kappa_traces = 100;
  std::size_t kappa_walkers = 1000;
  std::size_t lemma_samples = 100000;
  std::size_t range_paths = 20000;
  double eps_tube = 0.02;
  double eps_shell = 0.005;
  /// Half-width added on both sides of a trace's axial extent.
  double window = 6.0;
  /// Length of the cylinder in which constant traces are sampled.
  double l_trunc = 53.0;
  /// Euler step in units of R^2.
  double dt = 1e-4;

  static Budgets small();
  static Budgets standard();
  static Budgets large();
  /// "small", "default" or "large".
  static Budgets named(const std::string& name);

  void validate() const;
  WosConfig wos(double radius) const;
};

enum class LossMode { kUniform, kAxis };
enum class ConstantMode { kC, kCPrime };

const char* to_string(LossMode m);
const char* to_string(ConstantMode m);

struct LossEstimate {
  double length = 0.0;
  double radius = 0.0;
  LossMode mode = LossMode::kUniform;
  /// Exact minus fractured.
  Estimate value;
  /// Spectral rigidity of C_{L,R}.
  double exact = 0.0;
  /// Estimated expected rigidity of the fractured cylinder.
  Estimate fractured;
  /// One-sided bound on the part of the loss outside the integration window.
  double window_bias_bound = 0.0;
  double eps_tube = 0.0;
};

/// Expected rigidity loss of C_{L,R} from one trace started uniformly in the
/// cylinder or uniformly on its axis. Per trace, v_C - v_{C minus tube} is
/// integrated over the trace's axial extent widened by window * R. Trace i
/// uses rng.substream(i).
LossEstimate estimate_loss(double length, double radius, LossMode mode, const Budgets& budgets,
                           const RngStream& rng, Workers workers = {});

struct ConstantEstimate {
  ConstantMode mode = ConstantMode::kC;
  Estimate value;
  /// Bound on the probability that a trace reaches the ends of the
  /// truncated cylinder; such traces are cut short, biasing the estimate down.
  double truncation_bound = 0.0;
  /// One-sided bound on the contribution from outside the window.
  double window_bias_bound = 0.0;
  double l_trunc = 0.0;
  double window = 0.0;
  double eps_tube = 0.0;
};

/// Large-length loss constant on the unit-radius cylinder: kC averages the
/// start over the cross-section, kCPrime starts on the axis.
ConstantEstimate estimate_constant(ConstantMode mode, const Budgets& budgets, const RngStream& rng,
                                   Workers workers = {});

/// Outside-window bound 2 int_0^inf 2 sqrt(t) ierfc(W / (2 sqrt t)) Q'_{D_R}(t) dt
/// for a window of half-width W on each side.
double window_bias_bound(double window, double radius);

struct PlaneHittingResult {
  double length = 0.0;
  double radius = 0.0;
  double bound = 0.0;
  /// Largest estimate over the sampled starts, with its SE.
  Estimate probability;
  double worst_y1 = 0.0;
  double worst_r = 0.0;
  BoundsEntry entry() const;
};

/// Probability of reaching the end planes before lateral exit, for starts with
/// |y1| <= L/2 - sqrt(R L). The axial and lateral motions are independent, so
/// each lateral exit time sample tau' contributes the exact one-dimensional
/// probability of leaving the axial interval before tau'.
PlaneHittingResult lemma32_check(double length, double radius, std::size_t n, const RngStream& rng,
                            Workers workers = {});

/// Runs every check and estimator; failures are recorded as entries, never
/// thrown.
BoundsReport full_report(const Budgets& budgets, const RngStream& rng, Workers workers = {});

}  // namespace fracture
