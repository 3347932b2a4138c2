#include "fracture/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracture::spectral {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

long double j0_series(long double x) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::max(1.0L, std::fabs(sum))) break;
  }
  return sum;
}

double j0_asymptotic(double x) {
  // u_k = prod_{i<=k} (2i-1)^2 / (k! (8x)^k); P = u0 - u2 + ..., Q = -u1 + u3 - ...
  double p = 1.0;
  double q = 0.0;
  double u = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double f = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    u *= f;
    if (u > prev) break;  // asymptotic series started to diverge
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sign * u;
    else
      q -= sign * u;
    if (u < 1e-18) break;
    prev = u;
  }
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double cos_chi = (c + s) * (0.5 * std::numbers::sqrt2);
  const double sin_chi = (s - c) * (0.5 * std::numbers::sqrt2);
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

double bisect_zero(std::size_t k) {
  double lo = (static_cast<double>(k) - 0.25) * kPi;
  double hi = (static_cast<double>(k) - 0.125) * kPi;
  double flo = bessel_j0(lo);
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = bessel_j0(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return std::abs(bessel_j0(lo)) <= std::abs(bessel_j0(hi)) ? lo : hi;
}

std::mutex g_zero_mutex;
std::shared_ptr<const std::vector<double>> g_zeros;

// Hurwitz zeta sum_{m>=0} (m + a)^{-s}, s > 1, a > 0: ten direct terms then
// Euler-Maclaurin with Bernoulli corrections through B6.
double hurwitz_zeta(double s, double a) {
  double sum = 0.0;
  for (int m = 0; m < 10; ++m) sum += std::pow(a + m, -s);
  const double b = a + 10.0;
  sum += std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s) + s * std::pow(b, -s - 1.0) / 12.0 -
         s * (s + 1) * (s + 2) * std::pow(b, -s - 3.0) / 720.0 +
         s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(b, -s - 5.0) / 30240.0;
  return sum;
}

// Sum over k > K of 4 pi R^2 / j_k^2 exp(-tau j_k^2) using j_{K+1} >= (K + 3/4) pi
// and zero spacing >= 3, capped by the power-sum bound.
double disc_tail_bound(double tau, double R, std::size_t K) {
  const double b = (static_cast<double>(K) + 0.75) * kPi;
  const double geometric = 4.0 * kPi * R * R / (b * b) * std::exp(-tau * b * b) /
                           -std::expm1(-6.0 * tau * b);
  const double power = K >= 1 ? 4.0 * kPi * R * R * zero_power_tail_bound(2.0, K)
                              : std::numeric_limits<double>::infinity();
  return std::min(geometric, power);
}

// Sum over odd n >= 2N+1 of 8L/(n pi)^2 exp(-(n pi)^2 a), a = t/L^2.
double interval_tail_bound(double a, double L, std::size_t N) {
  const double n = 2.0 * static_cast<double>(N) + 1.0;
  const double first = 8.0 * L / (n * n * kPi * kPi) * std::exp(-n * n * kPi * kPi * a);
  const double geometric = first / -std::expm1(-4.0 * n * kPi * kPi * a);
  const double power = N >= 1 ? 8.0 * L / (kPi * kPi) / (2.0 * (2.0 * static_cast<double>(N) - 1.0))
                              : std::numeric_limits<double>::infinity();
  return std::min(geometric, power);
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < kBesselSwitchover) return static_cast<double>(j0_series(x));
  return j0_asymptotic(x);
}

std::vector<double> bessel_zeros(std::size_t n) {
  std::vector<double> z;
  z.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) z.push_back(bisect_zero(k));
  return z;
}

std::shared_ptr<const std::vector<double>> bessel_zero_table(std::size_t n) {
  std::lock_guard lock(g_zero_mutex);
  if (g_zeros && g_zeros->size() >= n) return g_zeros;
  const std::size_t have = g_zeros ? g_zeros->size() : 0;
  const std::size_t want = std::max<std::size_t>({n, 2 * have, 64});
  auto grown = std::make_shared<std::vector<double>>();
  grown->reserve(want);
  if (g_zeros) grown->assign(g_zeros->begin(), g_zeros->end());
  for (std::size_t k = have + 1; k <= want; ++k) grown->push_back(bisect_zero(k));
  g_zeros = std::move(grown);
  return g_zeros;
}

DiscSpectrum::DiscSpectrum(double radius, std::size_t n_terms)
    : radius_(radius), n_terms_(n_terms) {
  require_positive(radius, "radius");
  if (n_terms == 0) throw std::invalid_argument("n_terms must be at least 1");
  zeros_ = bessel_zero_table(n_terms);
}

IntervalSpectrum::IntervalSpectrum(double l, std::size_t n) : length(l), n_terms(n) {
  require_positive(l, "length");
  if (n == 0) throw std::invalid_argument("n_terms must be at least 1");
}

double zero_power_tail_bound(double s, std::size_t K) {
  if (!(s > 1.0)) throw std::invalid_argument("power must exceed 1");
  if (K == 0) throw std::invalid_argument("tail bound needs K >= 1");
  const double base = static_cast<double>(K) - 0.25;
  return std::pow(kPi, -s) * std::pow(base, 1.0 - s) / (s - 1.0);
}

double zero_power_tail_estimate(double s, std::size_t K) {
  // j_k^{-s} = beta^{-s} (1 - s/(8 beta^2) + (31 s/384 + s(s+1)/128)/beta^4 + ...),
  // beta = (k - 1/4) pi, summed over k > K as Hurwitz zeta values at K + 3/4.
  const double a = static_cast<double>(K) + 0.75;
  const double pis = std::pow(kPi, -s);
  return pis * (hurwitz_zeta(s, a) - s / (8.0 * kPi * kPi) * hurwitz_zeta(s + 2.0, a) +
                (31.0 * s / 384.0 + s * (s + 1.0) / 128.0) * std::pow(kPi, -4.0) *
                    hurwitz_zeta(s + 4.0, a));
}

SeriesValue zero_power_sum(double s, std::size_t K, bool tail_corrected) {
  if (K == 0) throw std::invalid_argument("K must be at least 1");
  const auto z = bessel_zero_table(K);
  double sum = 0.0;
  // Smallest terms first keeps the rounding error at the level of the result.
  for (std::size_t k = K; k-- > 0;) sum += std::pow((*z)[k], -s);
  SeriesValue out{sum, K, zero_power_tail_bound(s, K)};
  if (tail_corrected) {
    out.value += zero_power_tail_estimate(s, K);
    const double a = static_cast<double>(K) + 0.75;
    // Size of the first neglected expansion order (safety factor 10) plus
    // summation rounding.
    out.tail_bound = 10.0 * std::pow(s + 3.0, 3.0) * std::pow(kPi, -s - 6.0) * std::pow(a, -s - 5.0) /
                         (s + 5.0) +
                     static_cast<double>(K) * std::numeric_limits<double>::epsilon() * out.value;
  }
  return out;
}

SeriesValue disc_heat_content(double t, const DiscSpectrum& s) {
  require_positive(t, "t");
  const double R = s.radius();
  const double tau = t / (R * R);
  double sum = 0.0;
  for (std::size_t k = s.n_terms(); k-- > 0;) {
    const double j = s.zero(k);
    sum += 4.0 * kPi * R * R / (j * j) * std::exp(-tau * j * j);
  }
  return {sum, s.n_terms(), disc_tail_bound(tau, R, s.n_terms())};
}

SeriesValue disc_heat_content(double t, double radius) {
  require_positive(t, "t");
  require_positive(radius, "radius");
  const double tau = t / (radius * radius);
  std::size_t K = 8;
  for (;;) {
    const double partial_lead = 4.0 * kPi * radius * radius / (2.4048255576957727 * 2.4048255576957727) *
                                std::exp(-tau * 2.4048255576957727 * 2.4048255576957727);
    if (disc_tail_bound(tau, radius, K) <= kSeriesRelTol * partial_lead || K >= kMaxDiscTerms) break;
    K = std::min(kMaxDiscTerms, 2 * K);
  }
  return disc_heat_content(t, DiscSpectrum(radius, K));
}

SeriesValue interval_heat_content(double t, const IntervalSpectrum& s) {
  require_positive(t, "t");
  const double L = s.length;
  const double a = t / (L * L);
  double sum = 0.0;
  for (std::size_t m = s.n_terms; m-- > 0;) {
    const double n = 2.0 * static_cast<double>(m) + 1.0;
    sum += 8.0 * L / (n * n * kPi * kPi) * std::exp(-n * n * kPi * kPi * a);
  }
  return {sum, s.n_terms, interval_tail_bound(a, L, s.n_terms)};
}

SeriesValue interval_heat_content(double t, double length) {
  require_positive(t, "t");
  require_positive(length, "length");
  const double a = t / (length * length);
  const double lead = 8.0 * length / (kPi * kPi) * std::exp(-kPi * kPi * a);
  std::size_t N = 4;
  constexpr std::size_t kMaxIntervalTerms = std::size_t{1} << 26;
  while (interval_tail_bound(a, length, N) > kSeriesRelTol * lead && N < kMaxIntervalTerms) N *= 2;
  return interval_heat_content(t, IntervalSpectrum(length, N));
}

SeriesValue cylinder_heat_content(double t, double length, double radius) {
  const SeriesValue a = interval_heat_content(t, length);
  const SeriesValue b = disc_heat_content(t, radius);
  return {a.value * b.value, a.n_terms * b.n_terms,
          a.value * b.tail_bound + b.value * a.tail_bound + a.tail_bound * b.tail_bound};
}

double rigidity_disc(double radius) {
  require_positive(radius, "radius");
  return kPi * std::pow(radius, 4) / 8.0;
}

SeriesValue rigidity_disc_series(const DiscSpectrum& s) {
  const double R4 = std::pow(s.radius(), 4);
  double sum = 0.0;
  for (std::size_t k = s.n_terms(); k-- > 0;) sum += 4.0 * kPi * R4 / std::pow(s.zero(k), 4);
  return {sum, s.n_terms(), 4.0 * kPi * R4 * zero_power_tail_bound(4.0, s.n_terms())};
}

SeriesValue rigidity_cylinder(double length, double radius, double rel_tol) {
  require_positive(length, "length");
  require_positive(radius, "radius");
  require_positive(rel_tol, "rel_tol");
  const double L = length;
  const double R = radius;
  // Lower bound on the result from the first mode alone sets the target.
  const double j1 = 2.4048255576957727;
  const double first = 4.0 * kPi * R * R / (j1 * j1) *
                       (L * R * R / (j1 * j1) - 2.0 * R * R * R * std::tanh(j1 * L / (2.0 * R)) / (j1 * j1 * j1));
  const double scale = 4.0 * kPi * std::pow(R, 4) * L;
  // Tail terms are bounded by 4 pi R^4 L / j^4.
  std::size_t K = 16;
  while (scale * zero_power_tail_bound(4.0, K) > rel_tol * first && K < kMaxDiscTerms)
    K = std::min(kMaxDiscTerms, 2 * K);
  const auto z = bessel_zero_table(K);
  double sum = 0.0;
  for (std::size_t k = K; k-- > 0;) {
    const double j = (*z)[k];
    const double j2 = j * j;
    sum += 4.0 * kPi * R * R / j2 * (L * R * R / j2 - 2.0 * R * R * R * std::tanh(j * L / (2.0 * R)) / (j2 * j));
  }
  return {sum, K, scale * zero_power_tail_bound(4.0, K)};
}

double rigidity_cylinder_double_series(double length, double radius, std::size_t n_odd,
                                       std::size_t n_zeros) {
  require_positive(length, "length");
  require_positive(radius, "radius");
  const auto z = bessel_zero_table(n_zeros);
  double sum = 0.0;
  for (std::size_t k = n_zeros; k-- > 0;) {
    const double j = (*z)[k];
    const double disc = 4.0 * kPi * radius * radius / (j * j);
    const double mu = j * j / (radius * radius);
    for (std::size_t m = n_odd; m-- > 0;) {
      const double n = 2.0 * static_cast<double>(m) + 1.0;
      const double w = n * kPi / length;
      sum += 8.0 * length / (n * n * kPi * kPi) * disc / (w * w + mu);
    }
  }
  return sum;
}

SeriesValue weighted_moment(double power, const DiscSpectrum& s) {
  if (!(power > -1.0)) throw std::invalid_argument("power must exceed -1");
  const double R = s.radius();
  const double e = 2.0 * power + 4.0;
  const double coeff = 4.0 * kPi * std::tgamma(power + 1.0) * std::pow(R, e);
  double sum = 0.0;
  for (std::size_t k = s.n_terms(); k-- > 0;) sum += std::pow(s.zero(k), -e);
  return {coeff * sum, s.n_terms(), coeff * zero_power_tail_bound(e, s.n_terms())};
}

SeriesValue weighted_moment(double power, double radius) {
  if (!(power > -1.0)) throw std::invalid_argument("power must exceed -1");
  require_positive(radius, "radius");
  const double e = 2.0 * power + 4.0;
  const double lead = std::pow(2.4048255576957727, -e);
  std::size_t K = 16;
  while (zero_power_tail_bound(e, K) > kSeriesRelTol * lead && K < kMaxDiscTerms)
    K = std::min(kMaxDiscTerms, 2 * K);
  return weighted_moment(power, DiscSpectrum(radius, K));
}

double interval_exit_probability(double x, double length, double t) {
  require_positive(length, "length");
  if (!(x > 0.0 && x < length)) return 1.0;
  if (!(t > 0.0)) return 0.0;
  if (t > length * length) return 1.0 - interval_survival(x, length, t);
  // Alternating reflections off both ends; terms decay like exp(-(n-1)^2 / 4).
  const double a = length - x;
  const double b = x;
  const double scale = 1.0 / (2.0 * std::sqrt(t));
  double sum = 0.0;
  for (int n = 1; n < 400; ++n) {
    const double shift = (n - 1) * length;
    const double term = std::erfc((a + shift) * scale) + std::erfc((b + shift) * scale);
    sum += (n % 2 == 1) ? term : -term;
    if (term < 1e-300) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double interval_survival(double x, double length, double t) {
  require_positive(length, "length");
  if (!(x > 0.0 && x < length)) return 0.0;
  if (!(t > 0.0)) return 1.0;
  if (t <= length * length) return 1.0 - interval_exit_probability(x, length, t);
  const double a = t / (length * length);
  double sum = 0.0;
  for (int m = 0; m < 1000; ++m) {
    const double n = 2.0 * m + 1.0;
    const double decay = std::exp(-n * n * kPi * kPi * a);
    sum += 4.0 / (n * kPi) * std::sin(n * kPi * x / length) * decay;
    if (decay < 1e-20) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double BoundConstants::c_lower_profile(double a) {
  return (1.0 - 4.0 * a) * (1.0 + 2.0 * a) * std::pow(a, 5) / 24.0;
}

double BoundConstants::cp_lower_profile(double a) {
  return (1.0 - 3.0 * a) * (1.0 + a) * std::pow(a, 3) / 24.0;
}

const BoundConstants& bound_constants() {
  static const BoundConstants c = [] {
    BoundConstants b{};
    b.j0 = bessel_zero_table(1)->front();
    b.c_upper = kPi / (2.0 * b.j0);
    b.c_lower_coeff = (67703.0 * std::sqrt(79.0) - 582194.0) / 5059848192.0;
    b.cp_lower_coeff = (2867.0 * std::sqrt(61.0) - 21773.0) / 303750.0;
    b.cp_upper = kPi / 4.0 * (1.0 + 1.0 / b.j0);
    b.a_opt = (std::sqrt(79.0) - 3.0) / 28.0;
    b.ap_opt = (std::sqrt(61.0) - 4.0) / 15.0;
    return b;
  }();
  return c;
}

double loss_upper_bound(double radius) {
  return 6.0 * radius / bound_constants().j0 * rigidity_disc(radius);
}

double loss_limsup_bound(double radius) {
  return 4.0 * radius / bound_constants().j0 * rigidity_disc(radius);
}

double loss_finite_length_bound(double length, double radius) {
  require_positive(length, "length");
  const double j0 = bound_constants().j0;
  return 4.0 * radius / j0 * rigidity_disc(radius) +
         8.0 / length * radius * radius / (j0 * j0) * rigidity_disc(radius);
}

double plane_hitting_bound(double length, double radius) {
  require_positive(length, "length");
  require_positive(radius, "radius");
  const double j0 = bound_constants().j0;
  return (j0 + 1.0) * std::sqrt(kPi) * std::exp(-j0 * std::sqrt(length) / (2.0 * std::sqrt(radius)));
}

BoundsEntry RigiditySandwich::entry() const {
  BoundsEntry e;
  e.name = "rigidity_sandwich";
  e.lower = 0.0;
  e.value = delta;
  e.upper = upper;
  e.tolerance = tail_bound;
  e.inputs = {{"L", length}, {"R", radius}, {"rigidity", rigidity}};
  e.evaluate();
  return e;
}

RigiditySandwich theorem11_check(double length, double radius) {
  const SeriesValue T = rigidity_cylinder(length, radius);
  const SeriesValue w = weighted_moment(0.5, radius);
  const double Tp = rigidity_disc(radius);
  const double j0 = bound_constants().j0;
  RigiditySandwich s{};
  s.length = length;
  s.radius = radius;
  s.rigidity = T.value;
  s.delta = T.value - Tp * length + 4.0 / std::sqrt(kPi) * w.value;
  s.upper = 8.0 / length * radius * radius / (j0 * j0) * Tp;
  // Both partial sums underestimate; add a rounding allowance for the difference.
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (T.value + Tp * length);
  s.tail_bound = T.tail_bound + 4.0 / std::sqrt(kPi) * w.tail_bound + rounding;
  return s;
}

}  // namespace fracture::spectral
