#include "qwalk/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

struct Analysis {
  double gap = 0.0;
  std::optional<PhaseVerdict> verdict;
};

double wrap_angle(double a) {
  a = std::remainder(a, 2 * pi);
  return a <= -pi ? a + 2 * pi : a;
}

Analysis analyze(double theta1, double theta2, int k_points, double k_origin) {
  if (k_points < 64) throw std::invalid_argument("winding number needs >= 64 k-points");
  const auto n = static_cast<std::size_t>(k_points);

  std::vector<double> energies(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = k_origin + 2 * pi * static_cast<double>(j) / k_points;
    const Eigen::Matrix2cd& u = momentum_unitary(theta1, theta2, k).matrix;
    energies[j] = std::acos(std::clamp(u.trace().real() / 2, -1.0, 1.0));
  }
  Analysis result;
  result.gap = pi;
  for (double e : energies) result.gap = std::min({result.gap, e, pi - e});
  if (result.gap < kGapThreshold) return result;

  std::vector<Eigen::Vector3d> axes(n);
  try {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = k_origin + 2 * pi * static_cast<double>(j) / k_points;
      const BandPoint bp = band_point(momentum_unitary(theta1, theta2, k));
      axes[j] = Eigen::Vector3d(bp.axis[0], bp.axis[1], bp.axis[2]);
    }
  } catch (const GaplessError&) {
    return result;
  }

  // Least-squares plane normal: eigenvector of sum n n^T with the smallest eigenvalue.
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& a : axes) scatter += a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
  const Eigen::Vector3d normal = solver.eigenvectors().col(0);

  double off_plane = 0.0;
  for (const auto& a : axes) off_plane = std::max(off_plane, std::abs(a.dot(normal)));
  if (off_plane >= kPlanarityTolerance) {
    throw NumericalError("Bloch axis leaves its plane by " + std::to_string(off_plane) +
                         " at theta = (" + std::to_string(theta1) + ", " +
                         std::to_string(theta2) + ")");
  }

  Eigen::Vector3d e1 = axes[0] - axes[0].dot(normal) * normal;
  e1.normalize();
  const Eigen::Vector3d e2 = normal.cross(e1);
  const auto phase = [&](const Eigen::Vector3d& a) { return std::atan2(a.dot(e2), a.dot(e1)); };

  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += wrap_angle(phase(axes[(j + 1) % n]) - phase(axes[j]));
  }

  PhaseVerdict verdict;
  verdict.gap = result.gap;
  verdict.signed_angle = total;
  verdict.winding = static_cast<int>(std::lround(std::abs(total) / (2 * pi)));
  verdict.plane_normal = {normal[0], normal[1], normal[2]};
  result.verdict = verdict;
  return result;
}

}  // namespace

MomentumUnitary momentum_unitary(double theta1, double theta2, double k) {
  Eigen::Matrix2cd t0 = Eigen::Matrix2cd::Zero();
  t0(0, 0) = std::exp(kI * k);
  t0(1, 1) = 1.0;
  Eigen::Matrix2cd t1 = Eigen::Matrix2cd::Zero();
  t1(0, 0) = 1.0;
  t1(1, 1) = std::exp(-kI * k);
  return {k, t1 * rotation_coin(theta2).matrix() * t0 * rotation_coin(theta1).matrix()};
}

BandPoint band_point(const MomentumUnitary& u) {
  const Eigen::Matrix2cd& m = u.matrix;
  const double energy = std::acos(std::clamp(m.trace().real() / 2, -1.0, 1.0));
  const double s = std::sin(energy);
  if (s <= kGapThreshold) {
    throw GaplessError("no rotation axis at k = " + std::to_string(u.k) +
                       " (sin E = " + std::to_string(s) + ")");
  }
  // Pauli components d_j = Tr(U sigma_j) / 2 = -i sin(E) n_j.
  const Complex dx = (m(0, 1) + m(1, 0)) / 2.0;
  const Complex dy = kI * (m(0, 1) - m(1, 0)) / 2.0;
  const Complex dz = (m(0, 0) - m(1, 1)) / 2.0;
  Eigen::Vector3d n(-dx.imag() / s, -dy.imag() / s, -dz.imag() / s);
  n.normalize();
  return {u.k, energy, {n[0], n[1], n[2]}};
}

PhaseVerdict winding_number(double theta1, double theta2, int k_points, double k_origin) {
  Analysis a = analyze(theta1, theta2, k_points, k_origin);
  if (!a.verdict) {
    throw GaplessError("winding undefined at theta = (" + std::to_string(theta1) + ", " +
                       std::to_string(theta2) + "): gap " + std::to_string(a.gap));
  }
  return *a.verdict;
}

double grid_value(double lo, double hi, int i, int n) {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

std::vector<PhaseCell> phase_diagram(int grid_n, int k_points) {
  if (grid_n < 16) throw std::invalid_argument("phase diagram grid must be >= 16");
  const auto n = static_cast<std::size_t>(grid_n);
  std::vector<PhaseCell> cells(n * n);
  parallel_for(cells.size(), [&](std::size_t idx) {
    PhaseCell& cell = cells[idx];
    cell.theta1 = grid_value(-pi, pi, static_cast<int>(idx / n), grid_n);
    cell.theta2 = grid_value(-pi, pi, static_cast<int>(idx % n), grid_n);
    const Analysis a = analyze(cell.theta1, cell.theta2, k_points, -pi);
    cell.gap = a.gap;
    if (a.verdict) cell.winding = a.verdict->winding;
  });
  return cells;
}

}  // namespace qwalk
