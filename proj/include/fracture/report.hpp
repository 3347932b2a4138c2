#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace fracture {

/// One checked inequality lower <= value <= upper. Unbounded sides are
/// +-infinity. `tolerance` widens both sides (3 SE for Monte Carlo values,
/// the series tail bound for spectral ones).
struct BoundsEntry {
  std::string name;
  double lower = -std::numeric_limits<double>::infinity();
  double value = 0.0;
  double se = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool pass = false;
  double margin = 0.0;
  /// Informational entries are reported but do not affect the overall verdict.
  bool informational = false;
  std::map<std::string, double> inputs;
  std::string note;

  /// Fills pass and margin from lower/value/upper/tolerance. The margin is the
  /// signed distance to the nearer (tolerance-widened) bound.
  BoundsEntry& evaluate();
};

struct BoundsReport {
  std::vector<BoundsEntry> entries;

  bool pass() const {
    for (const auto& e : entries)
      if (!e.informational && !e.pass) return false;
    return true;
  }
};

inline BoundsEntry& BoundsEntry::evaluate() {
  const double lo = lower - tolerance;
  const double hi = upper + tolerance;
  pass = lo <= value && value <= hi;
  margin = std::min(value - lo, hi - value);
  return *this;
}

}  // namespace fracture
