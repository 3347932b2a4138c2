#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace fracture {

/// Monte Carlo result.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  double lower(double k = 3.0) const { return mean - k * std_error; }
  double upper(double k = 3.0) const { return mean + k * std_error; }
};

/// Welford running mean/variance with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(n_ + other.n_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.n_) / n;
    m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
    n_ += other.n_;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 1 ? std::sqrt(sample_variance() / static_cast<double>(n_)) : 0.0;
  }

  Estimate estimate(std::uint64_t seed, double scale = 1.0) const {
    return {scale * mean(), std::abs(scale) * std_error(), n_, seed};
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Reduces per-item values in index order, so the result does not depend on
/// how the items were scheduled.
inline RunningStats summarize(std::span<const double> values) {
  RunningStats s;
  for (double v : values) s.add(v);
  return s;
}

/// |a - b| in units of the combined standard error.
inline double z_score(const Estimate& a, const Estimate& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  return se > 0.0 ? std::abs(a.mean - b.mean) / se : (a.mean == b.mean ? 0.0 : std::numeric_limits<double>::infinity());
}

}  // namespace fracture
