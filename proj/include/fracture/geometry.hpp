#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fracture {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

using Point3 = Vector3<double>;
using Point2 = Vector2<double>;

/// Open disc D_R = {|x'| < R} centred at the origin of the cross-section.
template <typename Scalar>
struct Disc {
  Scalar radius;

  explicit Disc(Scalar r) : radius(r) {
    if (!(r > Scalar(0)) || !std::isfinite(static_cast<double>(r)))
      throw std::invalid_argument("Disc: radius must be positive and finite");
  }
};

/// Open cylinder (-L/2, L/2) x D_R with axis along x1. A length of +infinity
/// denotes the infinite cylinder C_R.
template <typename Scalar>
struct Cylinder {
  Scalar radius;
  Scalar length;

  Cylinder(Scalar r, Scalar l) : radius(r), length(l) {
    if (!(r > Scalar(0)) || !std::isfinite(static_cast<double>(r)))
      throw std::invalid_argument("Cylinder: radius must be positive and finite");
    if (!(l > Scalar(0)))
      throw std::invalid_argument("Cylinder: length must be positive");
  }

  static Cylinder infinite(Scalar r) {
    return Cylinder(r, std::numeric_limits<Scalar>::infinity());
  }

  bool is_finite() const { return std::isfinite(static_cast<double>(length)); }
  Scalar half_length() const { return length / Scalar(2); }
  Scalar volume() const;
};

/// Open ball B(center; r).
template <typename Scalar>
struct Ball {
  Vector3<Scalar> center;
  Scalar radius;

  Ball(const Vector3<Scalar>& c, Scalar r) : center(c), radius(r) {
    if (!(r > Scalar(0)) || !std::isfinite(static_cast<double>(r)))
      throw std::invalid_argument("Ball: radius must be positive and finite");
    if (!c.allFinite())
      throw std::invalid_argument("Ball: center must be finite");
  }
};

using DiscSpec = Disc<double>;
using CylinderSpec = Cylinder<double>;
using BallSpec = Ball<double>;

template <typename Scalar>
Scalar Cylinder<Scalar>::volume() const {
  return std::numbers::pi_v<Scalar> * radius * radius * length;
}

// Signed distances: positive inside, zero on the boundary, negative outside.

template <typename Scalar>
Scalar dist_to_boundary(const Vector3<Scalar>& x, const Cylinder<Scalar>& c) {
  const Scalar lateral = c.radius - x.template tail<2>().norm();
  if (!c.is_finite()) return lateral;
  const Scalar cap = c.half_length() - std::abs(x.x());
  return std::min(lateral, cap);
}

template <typename Scalar>
Scalar dist_to_boundary(const Vector3<Scalar>& x, const Ball<Scalar>& b) {
  return b.radius - (x - b.center).norm();
}

template <typename Scalar>
Scalar dist_to_boundary(const Vector2<Scalar>& x, const Disc<Scalar>& d) {
  return d.radius - x.norm();
}

inline double dist_to_cylinder_boundary(const Point3& x, const CylinderSpec& c) {
  return dist_to_boundary(x, c);
}

/// Open-set membership: boundary points are outside.
template <typename Scalar, typename Domain>
bool contains(const Vector3<Scalar>& x, const Domain& d) {
  return dist_to_boundary(x, d) > Scalar(0);
}

/// Parameter s in (0, 1] at which the segment a + s (b - a) first leaves the
/// closed domain, given that a is inside and b is not. Falls back to 1 when
/// rounding puts the crossing past b.
double exit_fraction(const Point3& a, const Point3& b, const CylinderSpec& c);
double exit_fraction(const Point3& a, const Point3& b, const BallSpec& ball);

/// Exact squared distance from p to the segment [a, b].
template <typename Scalar>
Scalar squared_dist_to_segment(const Vector3<Scalar>& p, const Vector3<Scalar>& a,
                               const Vector3<Scalar>& b) {
  const Vector3<Scalar> ab = b - a;
  const Vector3<Scalar> ap = p - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 <= Scalar(0)) return ap.squaredNorm();
  Scalar s = ap.dot(ab) / len2;
  s = std::clamp(s, Scalar(0), Scalar(1));
  return (ap - s * ab).squaredNorm();
}

/// Axis-aligned bounding box.
struct Box3 {
  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = Point3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Point3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void extend(const Box3& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  double squared_distance(const Point3& p) const {
    const Point3 d = (lo - p).cwiseMax(p - hi).cwiseMax(0.0);
    return d.squaredNorm();
  }
  Point3 center() const { return 0.5 * (lo + hi); }
};

/// Ordered vertex sequence of a sampled path together with a bounding-volume
/// hierarchy over its segments. Immutable after construction; distance
/// queries are exact and safe to call concurrently.
class TracePolyline {
 public:
  TracePolyline(std::vector<Point3> vertices, double step_dt);

  const std::vector<Point3>& vertices() const { return vertices_; }
  double step_dt() const { return step_dt_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t segment_count() const { return segments_.size(); }
  const Box3& bounds() const { return nodes_.front().box; }

  /// Euclidean distance from x to the union of segments.
  double distance(const Point3& x) const;

  /// O(n) reference scan over every segment, including zero-length ones.
  double brute_force_distance(const Point3& x) const;

  /// Smallest radius of a ball about `center` containing every vertex.
  double circumscribed_radius(const Point3& center) const;

  /// Extent of the path along the x1 axis.
  std::pair<double, double> axial_extent() const;

  TracePolyline scaled(double factor) const;

 private:
  struct Node {
    Box3 box;
    std::uint32_t first;  // leaf: first segment slot; inner: left child
    std::uint32_t count;  // leaf: number of segments; inner: 0
    std::uint32_t right;  // inner: right child
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end,
                      std::vector<Point3>& centroids);

  std::vector<Point3> vertices_;
  double step_dt_;
  std::vector<std::uint32_t> segments_;  // index i denotes [v_i, v_{i+1}]
  std::vector<Node> nodes_;
};

inline double dist_to_trace(const Point3& x, const TracePolyline& t) {
  return t.distance(x);
}

enum class TraceFormat { kText, kBinary };

/// Text: first line step_dt, then one "x1 x2 x3" line per vertex, all with
/// round-trip precision. Binary: little-endian float64 step_dt, uint64 vertex
/// count, then 3 float64 per vertex.
void write_trace(std::ostream& os, const TracePolyline& t, TraceFormat fmt);
TracePolyline read_trace(std::istream& is, TraceFormat fmt);

void save_trace(const std::string& path, const TracePolyline& t);
TracePolyline load_trace(const std::string& path);

/// Binary when the path ends in ".bin", text otherwise.
TraceFormat format_for_path(const std::string& path);

}  // namespace fracture
