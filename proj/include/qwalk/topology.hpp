#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

inline constexpr double kGapThreshold = 1e-6;
inline constexpr double kPlanarityTolerance = 1e-6;
inline constexpr int kDefaultKPoints = 1024;

// Bloch-space split-step unitary at quasimomentum k.
struct MomentumUnitary {
  double k = 0.0;
  Eigen::Matrix2cd matrix;
};

// U(k) = T1(k) R(theta2) T0(k) R(theta1), T0(k) = diag(e^{ik}, 1),
// T1(k) = diag(1, e^{-ik}).
MomentumUnitary momentum_unitary(double theta1, double theta2, double k);

// U(k) = cos(E) I - i sin(E) (n . sigma), E in [0, pi].
struct BandPoint {
  double k = 0.0;
  double quasienergy = 0.0;
  std::array<double, 3> axis{};
};

// Throws GaplessError when sin(E) <= 1e-6, where no rotation axis exists.
BandPoint band_point(const MomentumUnitary& u);

struct PhaseVerdict {
  int winding = 0;           // |accumulated angle| / 2pi, rounded
  double gap = 0.0;          // min over k of distance of E(k) to {0, pi}
  double signed_angle = 0.0; // accumulated in-plane angle of n(k), radians
  std::array<double, 3> plane_normal{};
};

// Samples n(k) on `k_points` uniform points starting at k_origin, fits the
// plane the axis lives in, and counts its turns across the zone.
// Throws GaplessError when the gap is below kGapThreshold and NumericalError
// when n(k) leaves the fitted plane.
PhaseVerdict winding_number(double theta1, double theta2, int k_points = kDefaultKPoints,
                            double k_origin = -std::numbers::pi);

struct PhaseCell {
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::optional<int> winding;  // empty on a phase boundary (gap closed)
  double gap = 0.0;
};

// grid_n x grid_n cells on [-pi, pi]^2 (endpoints included), row-major with
// theta1 the slow index. Cells are computed in parallel.
std::vector<PhaseCell> phase_diagram(int grid_n, int k_points = kDefaultKPoints);

// Uniform grid value i of n on [lo, hi], endpoints included.
double grid_value(double lo, double hi, int i, int n);

}  // namespace qwalk
