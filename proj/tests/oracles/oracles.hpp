#pragma once

// Reference computations used only by the tests. Each one reaches its value
// by a route independent of the library code it checks.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace oracle {

/// Gaussian CDF of N(0, sigma^2) at x.
inline double gauss_cdf(double x, double sigma) {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

/// Survival to time t in (0, len) of Brownian motion with generator
/// d^2/dx^2, by the method of images on the transition density.
inline double interval_survival_images(double x, double len, double t) {
  const double sigma = std::sqrt(2.0 * t);
  const int images = 2 + static_cast<int>(std::ceil(10.0 * sigma / len));
  double s = 0.0;
  for (int k = -images; k <= images; ++k) {
    const double shift = 2.0 * k * len;
    s += gauss_cdf(len - x + shift, sigma) - gauss_cdf(-x + shift, sigma);
    s -= gauss_cdf(len + x + shift, sigma) - gauss_cdf(x + shift, sigma);
  }
  return s;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

/// Heat content of the interval (0, len) at time t from the image series.
inline double interval_heat_content_images(double t, double len) {
  return simpson([&](double x) { return interval_survival_images(x, len, t); }, 0.0, len, 4000);
}

/// Heat content of the disc D_R at time t: Crank-Nicolson on the radial heat
/// equation u_t = u_rr + u_r / r with u = 1 at t = 0 and u(R) = 0, cell-centred
/// finite volumes in r, then Q = int 2 pi r u dr.
inline double disc_heat_content_cn(double t, double radius, int cells = 800, int steps = 4000) {
  const double h = radius / cells;
  const double dt = t / steps;
  // Finite-volume Laplacian on cells [i h, (i+1) h] with flux r_{i+1/2} du/dr.
  Eigen::SparseMatrix<double> A(cells, cells);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd area(cells);
  for (int i = 0; i < cells; ++i) {
    const double rl = i * h;
    const double rr = (i + 1) * h;
    area(i) = 0.5 * (rr * rr - rl * rl);
    double diag = 0.0;
    if (i > 0) {
      trip.emplace_back(i, i - 1, rl / h);
      diag -= rl / h;
    }
    if (i + 1 < cells) {
      trip.emplace_back(i, i + 1, rr / h);
      diag -= rr / h;
    } else {
      // Dirichlet wall half a cell away.
      diag -= rr / (0.5 * h);
    }
    trip.emplace_back(i, i, diag);
  }
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseMatrix<double> M(cells, cells);
  M.setIdentity();
  Eigen::SparseMatrix<double> Ainv = area.cwiseInverse().asDiagonal() * A;
  Eigen::SparseMatrix<double> lhs = M - 0.5 * dt * Ainv;
  Eigen::SparseMatrix<double> rhs = M + 0.5 * dt * Ainv;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(lhs);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(cells);
  for (int s = 0; s < steps; ++s) u = lu.solve(rhs * u);
  return 2.0 * std::numbers::pi * area.dot(u);
}

/// Torsion function of the spherical shell r1 < |x| < r2 for generator Delta:
/// v = -r^2/6 + A + B/r vanishing on both spheres.
inline double shell_torsion(double r, double r1, double r2) {
  const double B = -(r2 * r2 - r1 * r1) / (6.0 * (1.0 / r1 - 1.0 / r2));
  const double A = r2 * r2 / 6.0 - B / r2;
  return -r * r / 6.0 + A + B / r;
}

/// Mean range of one-dimensional Brownian motion with generator d^2/dx^2
/// over [0, t]: twice the mean of |N(0, 2t)|.
inline double mean_range(double t) { return 4.0 * std::sqrt(t / std::numbers::pi); }

}  // namespace oracle
