#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;

inline constexpr int kCoinDim = 2;

// Finite 1D lattice with sites x = -L ... +L.
class LatticeWindow {
 public:
  explicit LatticeWindow(int half_width);

  // Window wide enough that an N-step walk from the origin never touches the
  // edge sites: the support grows by at most one site per step.
  static LatticeWindow for_steps(int steps) { return LatticeWindow(steps + 1); }

  int half_width() const noexcept { return half_width_; }
  int sites() const noexcept { return 2 * half_width_ + 1; }
  int min_x() const noexcept { return -half_width_; }
  int max_x() const noexcept { return half_width_; }
  bool contains(int x) const noexcept { return x >= -half_width_ && x <= half_width_; }
  std::size_t site_index(int x) const noexcept { return static_cast<std::size_t>(x + half_width_); }
  int position(std::size_t site) const noexcept { return static_cast<int>(site) - half_width_; }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

 private:
  int half_width_;
};

// Amplitudes over (position x coin), stored site-major: index = site * 2 + coin.
class SingleParticleState {
 public:
  explicit SingleParticleState(LatticeWindow window);

  const LatticeWindow& window() const noexcept { return window_; }

  Complex& operator()(int x, int coin) { return amps_[index(x, coin)]; }
  const Complex& operator()(int x, int coin) const { return amps_[index(x, coin)]; }

  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

  double norm_squared() const noexcept;

 private:
  std::size_t index(int x, int coin) const noexcept {
    return window_.site_index(x) * kCoinDim + static_cast<std::size_t>(coin);
  }

  LatticeWindow window_;
  std::vector<Complex> amps_;
};

// Amplitudes over (x_A, c_A, x_B, c_B). Particle A's (site, coin) index is the
// major axis, so the state reads as a row-major matrix with one row per
// particle-A basis state and one column per particle-B basis state.
class TwoParticleState {
 public:
  explicit TwoParticleState(LatticeWindow window);

  const LatticeWindow& window() const noexcept { return window_; }

  // Number of (site, coin) basis states of one particle.
  std::size_t particle_dim() const noexcept { return particle_dim_; }

  Complex& operator()(int xa, int ca, int xb, int cb) { return amps_[index(xa, ca, xb, cb)]; }
  const Complex& operator()(int xa, int ca, int xb, int cb) const {
    return amps_[index(xa, ca, xb, cb)];
  }

  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }

  double norm_squared() const noexcept;

 private:
  std::size_t index(int xa, int ca, int xb, int cb) const noexcept {
    const std::size_t a = window_.site_index(xa) * kCoinDim + static_cast<std::size_t>(ca);
    const std::size_t b = window_.site_index(xb) * kCoinDim + static_cast<std::size_t>(cb);
    return a * particle_dim_ + b;
  }

  LatticeWindow window_;
  std::size_t particle_dim_;
  std::vector<Complex> amps_;
};

// Reduced density matrix over coin space: 2x2 for one walker, 4x4 over
// (c_A, c_B) with index 2 * c_A + c_B for a pair.
class CoinDensityMatrix {
 public:
  // Validates Hermiticity (1e-12) and unit trace (1e-10).
  explicit CoinDensityMatrix(Eigen::MatrixXcd entries);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  Eigen::MatrixXcd entries_;
};

SingleParticleState make_single_state(LatticeWindow window, int x0,
                                      const std::array<Complex, 2>& coin_amps);

TwoParticleState tensor_pair(const SingleParticleState& a, const SingleParticleState& b);

// P(x) = sum_c |psi(x, c)|^2, indexed by window.site_index(x).
std::vector<double> position_distribution(const SingleParticleState& s);

CoinDensityMatrix reduce_to_coin(const SingleParticleState& s);
CoinDensityMatrix reduce_to_coin(const TwoParticleState& s);

// Entropy in bits. Eigenvalues in [-1e-10, 0) are clipped to zero; anything
// more negative throws NumericalError.
double von_neumann_entropy(const CoinDensityMatrix& rho);

}  // namespace qwalk
