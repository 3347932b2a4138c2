#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fracture/report.hpp"

// Eigenseries for the Dirichlet heat content and torsional rigidity of
// intervals, discs and finite cylinders, with analytic tail bounds so every
// value comes with a certificate.
//
// Conventions: the heat semigroup is generated by the Laplacian (not half of
// it). Disc eigenvalues are j_{0,k}^2 / R^2 and only radial modes carry mass,
// with squared mean (integral of the normalised eigenfunction)^2 =
// 4 pi R^2 / j_{0,k}^2. Interval modes are odd sine modes with squared mean
// 8 L / (n pi)^2.

namespace fracture::spectral {

/// Bessel function of the first kind of order zero. Ascending series in
/// extended precision below 17, Hankel asymptotic expansion above.
double bessel_j0(double x);

/// Argument at which bessel_j0 switches from the series to the asymptotic form.
inline constexpr double kBesselSwitchover = 17.0;

/// First n positive zeros of J0, bisected inside the rigorous brackets
/// ((k - 1/4) pi, (k - 1/8) pi) down to adjacent doubles.
std::vector<double> bessel_zeros(std::size_t n);

/// Shared, lazily extended table holding at least n zeros.
std::shared_ptr<const std::vector<double>> bessel_zero_table(std::size_t n);

/// Partial sum of a series with a rigorous bound on the neglected tail.
struct SeriesValue {
  double value = 0.0;
  std::size_t n_terms = 0;
  double tail_bound = 0.0;
};

/// Default relative tolerance for adaptively truncated series.
inline constexpr double kSeriesRelTol = 1e-12;
/// Hard cap on the number of Bessel zeros any adaptive series may use.
inline constexpr std::size_t kMaxDiscTerms = 200000;

/// Cached eigendata of the disc D_R: radius and the first n_terms zeros.
class DiscSpectrum {
 public:
  DiscSpectrum(double radius, std::size_t n_terms);

  double radius() const { return radius_; }
  std::size_t n_terms() const { return n_terms_; }
  double zero(std::size_t k) const { return (*zeros_)[k]; }
  double first_eigenvalue() const { return zero(0) * zero(0) / (radius_ * radius_); }

 private:
  double radius_;
  std::size_t n_terms_;
  std::shared_ptr<const std::vector<double>> zeros_;
};

/// Eigendata of the interval (-L/2, L/2); n_terms counts odd modes.
struct IntervalSpectrum {
  double length;
  std::size_t n_terms;

  IntervalSpectrum(double l, std::size_t n);
};

/// Sum over k > K of j_{0,k}^{-s}: rigorous upper bound, using j_{0,k} > (k - 1/4) pi.
double zero_power_tail_bound(double s, std::size_t K);
/// Asymptotic estimate of the same tail (Hurwitz zeta via Euler-Maclaurin
/// with the first McMahon correction). Accurate to O(K^{-s-3}).
double zero_power_tail_estimate(double s, std::size_t K);

/// Sum_{k <= K} j_{0,k}^{-s}; with `tail_corrected` the tail estimate is added
/// and tail_bound reports the residual uncertainty of that estimate.
SeriesValue zero_power_sum(double s, std::size_t K, bool tail_corrected);

/// Q'_{D_R}(t) = sum_k (4 pi R^2 / j_k^2) exp(-j_k^2 t / R^2).
SeriesValue disc_heat_content(double t, const DiscSpectrum& s);
/// Adaptive truncation to kSeriesRelTol.
SeriesValue disc_heat_content(double t, double radius);

/// Q^(1)(t) = sum_{n odd} (8 L / (n pi)^2) exp(-(n pi)^2 t / L^2).
SeriesValue interval_heat_content(double t, const IntervalSpectrum& s);
SeriesValue interval_heat_content(double t, double length);

/// Q_{C_{L,R}}(t) = Q^(1)(t) Q'(t).
SeriesValue cylinder_heat_content(double t, double length, double radius);

/// Two-dimensional torsional rigidity pi R^4 / 8.
double rigidity_disc(double radius);
/// sum_k 4 pi R^4 / j_k^4 over the spectrum.
SeriesValue rigidity_disc_series(const DiscSpectrum& s);

/// T(C_{L,R}) = sum_{n odd, k} (8L/(n pi)^2)(4 pi R^2/j_k^2) / ((n pi/L)^2 + (j_k/R)^2),
/// with the sum over n done in closed form:
/// sum_k (4 pi R^2/j_k^2) [L R^2/j_k^2 - 2 R^3 tanh(j_k L/(2R)) / j_k^3].
SeriesValue rigidity_cylinder(double length, double radius, double rel_tol = kSeriesRelTol);

/// Truncated double series over (n odd, k) evaluated term by term; slow, used
/// to cross-check rigidity_cylinder.
double rigidity_cylinder_double_series(double length, double radius, std::size_t n_odd,
                                       std::size_t n_zeros);

/// Integral over (0, inf) of t^p Q'(t) dt = sum_k 4 pi Gamma(p+1) R^{2p+4} / j_k^{2p+4}.
/// Defined for p > -1; the artifact uses p in {-1/2, 1/2, 1}.
SeriesValue weighted_moment(double power, const DiscSpectrum& s);
SeriesValue weighted_moment(double power, double radius);

/// Survival probability to time t of one-dimensional Brownian motion with
/// generator d^2/dx^2 started at x in (0, length), killed at both ends.
double interval_survival(double x, double length, double t);
/// 1 - interval_survival, evaluated without cancellation for small t.
double interval_exit_probability(double x, double length, double t);

/// Closed-form constants appearing in the bounds on c, c' and related
/// quantities.
struct BoundConstants {
  double j0;
  double c_upper;          // pi / (2 j0)
  double c_lower_coeff;    // (67703 sqrt 79 - 582194) / 5059848192
  double cp_lower_coeff;   // (2867 sqrt 61 - 21773) / 303750
  double cp_upper;         // (pi/4)(1 + 1/j0)
  double a_opt;            // (sqrt 79 - 3) / 28
  double ap_opt;           // (sqrt 61 - 4) / 15

  /// (1 - 4a)(1 + 2a) a^5 / 24, the lower-bound prefactor for c at radius a.
  static double c_lower_profile(double a);
  /// (1 - 3a)(1 + a) a^3 / 24, the lower-bound prefactor for c' at radius a.
  static double cp_lower_profile(double a);
};

const BoundConstants& bound_constants();

/// 6 lambda_1'^{-1/2} T'(D_R): upper bound on the expected loss for every L.
double loss_upper_bound(double radius);
/// 4 lambda_1'^{-1/2} T'(D_R): upper bound on the limsup of the loss.
double loss_limsup_bound(double radius);
/// 4 lambda^{-1/2} T' + (8/L) lambda^{-1} T': finite-L form of the limsup bound.
double loss_finite_length_bound(double length, double radius);
/// (j0 + 1) sqrt(pi) exp(-j0 sqrt(L) / (2 sqrt(R))): decay bound on the
/// probability of reaching the end planes before lateral exit.
double plane_hitting_bound(double length, double radius);

/// Rigidity sandwich for C_{L,R}:
/// 0 <= T(C_{L,R}) - T'(D_R) L + (4/sqrt pi) int t^{1/2} Q' <= (8/L) lambda_1'^{-1} T'.
struct RigiditySandwich {
  double length;
  double radius;
  double rigidity;
  double delta;        // middle expression
  double upper;        // right-hand side
  double tail_bound;   // combined series tail bound of the computed terms
  BoundsEntry entry() const;
};

RigiditySandwich theorem11_check(double length, double radius);

}  // namespace fracture::spectral
