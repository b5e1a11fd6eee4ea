#include "qwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kNegativeEigenTolerance = 1e-10;

double sum_norm(std::span<const Complex> amps) {
  double total = 0.0;
  for (const Complex& a : amps) total += std::norm(a);
  return total;
}

// Accumulates v v^dagger over the upper triangle and mirrors it, so the
// result is Hermitian to the last bit.
template <int Dim>
Eigen::MatrixXcd outer_sum_to_matrix(const std::array<std::array<Complex, Dim>, Dim>& upper) {
  Eigen::MatrixXcd rho(Dim, Dim);
  for (int r = 0; r < Dim; ++r) {
    rho(r, r) = Complex(upper[r][r].real(), 0.0);
    for (int c = r + 1; c < Dim; ++c) {
      rho(r, c) = upper[r][c];
      rho(c, r) = std::conj(upper[r][c]);
    }
  }
  return rho;
}

}  // namespace

LatticeWindow::LatticeWindow(int half_width) : half_width_(half_width) {
  if (half_width < 1) {
    throw std::invalid_argument("lattice half width must be >= 1, got " +
                                std::to_string(half_width));
  }
}

SingleParticleState::SingleParticleState(LatticeWindow window)
    : window_(window), amps_(static_cast<std::size_t>(window.sites()) * kCoinDim) {}

double SingleParticleState::norm_squared() const noexcept { return sum_norm(amps_); }

TwoParticleState::TwoParticleState(LatticeWindow window)
    : window_(window),
      particle_dim_(static_cast<std::size_t>(window.sites()) * kCoinDim),
      amps_(particle_dim_ * particle_dim_) {}

double TwoParticleState::norm_squared() const noexcept { return sum_norm(amps_); }

CoinDensityMatrix::CoinDensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 4)) {
    throw std::invalid_argument("coin density matrix must be 2x2 or 4x4");
  }
  const double asymmetry = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > kHermitianTolerance) {
    throw NumericalError("coin density matrix is not Hermitian (deviation " +
                         std::to_string(asymmetry) + ")");
  }
  const double trace = entries_.trace().real();
  if (std::abs(trace - 1.0) > kNormTolerance) {
    throw NumericalError("coin density matrix trace is " + std::to_string(trace));
  }
}

SingleParticleState make_single_state(LatticeWindow window, int x0,
                                      const std::array<Complex, 2>& coin_amps) {
  if (!window.contains(x0) || std::abs(x0) >= window.half_width()) {
    throw std::invalid_argument("initial position " + std::to_string(x0) +
                                " is not strictly inside the window");
  }
  const double norm = std::norm(coin_amps[0]) + std::norm(coin_amps[1]);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("coin amplitudes are not normalized (|c|^2 = " +
                                std::to_string(norm) + ")");
  }
  SingleParticleState s(window);
  s(x0, 0) = coin_amps[0];
  s(x0, 1) = coin_amps[1];
  return s;
}

TwoParticleState tensor_pair(const SingleParticleState& a, const SingleParticleState& b) {
  if (!(a.window() == b.window())) {
    throw std::invalid_argument("tensor_pair: particle windows differ");
  }
  TwoParticleState pair(a.window());
  const auto amps_a = a.amplitudes();
  const auto amps_b = b.amplitudes();
  auto out = pair.amplitudes();
  const std::size_t dim = pair.particle_dim();
  for (std::size_t i = 0; i < dim; ++i) {
    if (amps_a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] = amps_a[i] * amps_b[j];
  }
  return pair;
}

std::vector<double> position_distribution(const SingleParticleState& s) {
  const auto amps = s.amplitudes();
  std::vector<double> p(static_cast<std::size_t>(s.window().sites()));
  for (std::size_t site = 0; site < p.size(); ++site) {
    p[site] = std::norm(amps[site * kCoinDim]) + std::norm(amps[site * kCoinDim + 1]);
  }
  return p;
}

CoinDensityMatrix reduce_to_coin(const SingleParticleState& s) {
  std::array<std::array<Complex, 2>, 2> acc{};
  const auto amps = s.amplitudes();
  for (std::size_t site = 0; site < amps.size() / kCoinDim; ++site) {
    const Complex a0 = amps[site * kCoinDim];
    const Complex a1 = amps[site * kCoinDim + 1];
    acc[0][0] += std::norm(a0);
    acc[1][1] += std::norm(a1);
    acc[0][1] += a0 * std::conj(a1);
  }
  return CoinDensityMatrix(outer_sum_to_matrix<2>(acc));
}

CoinDensityMatrix reduce_to_coin(const TwoParticleState& s) {
  std::array<std::array<Complex, 4>, 4> acc{};
  const auto amps = s.amplitudes();
  const std::size_t dim = s.particle_dim();
  const std::size_t sites = dim / kCoinDim;
  std::array<Complex, 4> v{};
  for (std::size_t sa = 0; sa < sites; ++sa) {
    const Complex* row0 = &amps[(sa * kCoinDim) * dim];
    const Complex* row1 = &amps[(sa * kCoinDim + 1) * dim];
    for (std::size_t sb = 0; sb < sites; ++sb) {
      v[0] = row0[sb * kCoinDim];
      v[1] = row0[sb * kCoinDim + 1];
      v[2] = row1[sb * kCoinDim];
      v[3] = row1[sb * kCoinDim + 1];
      for (int r = 0; r < 4; ++r) {
        if (v[r] == Complex{}) continue;
        acc[r][r] += std::norm(v[r]);
        for (int c = r + 1; c < 4; ++c) acc[r][c] += v[r] * std::conj(v[c]);
      }
    }
  }
  return CoinDensityMatrix(outer_sum_to_matrix<4>(acc));
}

double von_neumann_entropy(const CoinDensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen decomposition of coin density matrix failed");
  }
  double entropy = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda < -kNegativeEigenTolerance) {
      throw NumericalError("invalid density matrix: eigenvalue " + std::to_string(lambda));
    }
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return std::max(entropy, 0.0);
}

}  // namespace qwalk
