#include "fracture/geometry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fracture {

namespace {

constexpr std::uint32_t kLeafSize = 4;

// Positive root of a s^2 + b s + c = 0 clamped to [0, 1]. c < 0 because the
// segment starts inside, so the roots straddle zero.
double first_root_unit(double a, double b, double c) {
  if (a <= 0.0) return 1.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 1.0;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  const double s = r2;
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

double exit_fraction(const Point3& a, const Point3& b, const CylinderSpec& c) {
  const Point3 d = b - a;
  // Lateral surface |a' + s d'| = R.
  const double qa = d.tail<2>().squaredNorm();
  const double qb = 2.0 * a.tail<2>().dot(d.tail<2>());
  const double qc = a.tail<2>().squaredNorm() - c.radius * c.radius;
  double s = 1.0;
  if (b.tail<2>().norm() >= c.radius) s = first_root_unit(qa, qb, qc);
  if (c.is_finite() && std::abs(b.x()) >= c.half_length() && d.x() != 0.0) {
    const double plane = d.x() > 0.0 ? c.half_length() : -c.half_length();
    s = std::min(s, std::clamp((plane - a.x()) / d.x(), 0.0, 1.0));
  }
  return s;
}

double exit_fraction(const Point3& a, const Point3& b, const BallSpec& ball) {
  const Point3 d = b - a;
  const Point3 p = a - ball.center;
  return first_root_unit(d.squaredNorm(), 2.0 * p.dot(d),
                         p.squaredNorm() - ball.radius * ball.radius);
}

TracePolyline::TracePolyline(std::vector<Point3> vertices, double step_dt)
    : vertices_(std::move(vertices)), step_dt_(step_dt) {
  if (vertices_.size() < 2)
    throw std::invalid_argument("TracePolyline: needs at least 2 vertices");
  if (!(step_dt_ > 0.0))
    throw std::invalid_argument("TracePolyline: step_dt must be positive");
  for (const auto& v : vertices_)
    if (!v.allFinite())
      throw std::invalid_argument("TracePolyline: vertices must be finite");

  segments_.reserve(vertices_.size() - 1);
  for (std::uint32_t i = 0; i + 1 < vertices_.size(); ++i)
    if (vertices_[i] != vertices_[i + 1]) segments_.push_back(i);
  // Fully degenerate path: keep one zero-length segment so it still has a
  // location.
  if (segments_.empty()) segments_.push_back(0);

  std::vector<Point3> centroids(vertices_.size() - 1);
  for (auto s : segments_) centroids[s] = 0.5 * (vertices_[s] + vertices_[s + 1]);
  nodes_.reserve(2 * segments_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(segments_.size()), centroids);
}

std::uint32_t TracePolyline::build(std::uint32_t begin, std::uint32_t end,
                                   std::vector<Point3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});

  Box3 box;
  Box3 cbox;
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto s = segments_[i];
    box.extend(vertices_[s]);
    box.extend(vertices_[s + 1]);
    cbox.extend(centroids[s]);
  }
  nodes_[index].box = box;

  if (end - begin <= kLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    nodes_[index].right = 0;
    return index;
  }

  int axis = 0;
  (cbox.hi - cbox.lo).maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(segments_.begin() + begin, segments_.begin() + mid,
                   segments_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
                     return centroids[a][axis] < centroids[b][axis];
                   });

  const std::uint32_t left = build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].first = left;
  nodes_[index].count = 0;
  nodes_[index].right = right;
  return index;
}

double TracePolyline::distance(const Point3& x) const {
  double best = std::numeric_limits<double>::infinity();
  std::array<std::uint32_t, 64> stack;
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.box.squared_distance(x) >= best) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto s = segments_[i];
        best = std::min(best, squared_dist_to_segment(x, vertices_[s], vertices_[s + 1]));
      }
      continue;
    }
    const std::uint32_t l = node.first;
    const std::uint32_t r = node.right;
    const double dl = nodes_[l].box.squared_distance(x);
    const double dr = nodes_[r].box.squared_distance(x);
    // Push the farther child first so the nearer one is explored next.
    if (dl < dr) {
      if (dr < best) stack[top++] = r;
      if (dl < best) stack[top++] = l;
    } else {
      if (dl < best) stack[top++] = l;
      if (dr < best) stack[top++] = r;
    }
  }
  return std::sqrt(best);
}

double TracePolyline::brute_force_distance(const Point3& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
    best = std::min(best, squared_dist_to_segment(x, vertices_[i], vertices_[i + 1]));
  return std::sqrt(best);
}

double TracePolyline::circumscribed_radius(const Point3& center) const {
  double r2 = 0.0;
  for (const auto& v : vertices_) r2 = std::max(r2, (v - center).squaredNorm());
  return std::sqrt(r2);
}

std::pair<double, double> TracePolyline::axial_extent() const {
  const Box3& b = bounds();
  return {b.lo.x(), b.hi.x()};
}

TracePolyline TracePolyline::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("TracePolyline::scaled: factor must be positive");
  std::vector<Point3> v(vertices_);
  for (auto& p : v) p *= factor;
  return TracePolyline(std::move(v), step_dt_ * factor * factor);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary trace format assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value;
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw std::runtime_error("read_trace: truncated binary trace");
  return value;
}

}  // namespace

void write_trace(std::ostream& os, const TracePolyline& t, TraceFormat fmt) {
  if (fmt == TraceFormat::kBinary) {
    put<double>(os, t.step_dt());
    put<std::uint64_t>(os, t.size());
    for (const auto& v : t.vertices())
      for (int k = 0; k < 3; ++k) put<double>(os, v[k]);
    return;
  }
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << t.step_dt() << '\n';
  for (const auto& v : t.vertices()) buf << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  os << buf.str();
}

TracePolyline read_trace(std::istream& is, TraceFormat fmt) {
  std::vector<Point3> vertices;
  double dt = 0.0;
  if (fmt == TraceFormat::kBinary) {
    dt = get<double>(is);
    const auto n = get<std::uint64_t>(is);
    if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("read_trace: vertex count too large");
    vertices.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      Point3 p;
      for (int k = 0; k < 3; ++k) p[k] = get<double>(is);
      vertices.push_back(p);
    }
  } else {
    if (!(is >> dt)) throw std::runtime_error("read_trace: missing step_dt");
    Point3 p;
    while (is >> p.x()) {
      if (!(is >> p.y() >> p.z())) throw std::runtime_error("read_trace: incomplete vertex");
      vertices.push_back(p);
    }
    if (!is.eof()) throw std::runtime_error("read_trace: malformed text trace");
  }
  return TracePolyline(std::move(vertices), dt);
}

TraceFormat format_for_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0 ? TraceFormat::kBinary
                                                                         : TraceFormat::kText;
}

void save_trace(const std::string& path, const TracePolyline& t) {
  const auto fmt = format_for_path(path);
  std::ofstream os(path, fmt == TraceFormat::kBinary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("save_trace: cannot open " + path);
  write_trace(os, t, fmt);
  if (!os) throw std::runtime_error("save_trace: write failed for " + path);
}

TracePolyline load_trace(const std::string& path) {
  const auto fmt = format_for_path(path);
  std::ifstream is(path, fmt == TraceFormat::kBinary ? std::ios::binary : std::ios::in);
  if (!is) throw std::runtime_error("load_trace: cannot open " + path);
  return read_trace(is, fmt);
}

}  // namespace fracture
