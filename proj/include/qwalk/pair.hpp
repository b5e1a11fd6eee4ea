#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class PairStateKind { psi_plus, psi_minus, separable };

// Coin part: psi_plus = (|01> + |10>)/sqrt2, psi_minus = (|01> - |10>)/sqrt2,
// separable = |01>, with labels ordered (c_A c_B).
struct InitialPairState {
  PairStateKind kind = PairStateKind::psi_plus;
  int xa = 0;
  int xb = 0;
};

TwoParticleState make_pair_state(const InitialPairState& init, LatticeWindow window);

using PairObserver = std::function<void(int step, const TwoParticleState&)>;

// Noninteracting evolution U_A (x) U_B: each step applies particle A's split
// step on its indices and particle B's on its own.
TwoParticleState evolve_pair(TwoParticleState s, const AngleField& field_a,
                             const AngleField& field_b, int steps,
                             std::span<const PairObserver> observers = {});

// P(i, j), row i for particle A, column j for particle B, both indexed by
// window site.
class JointDistribution {
 public:
  JointDistribution(LatticeWindow window, std::vector<double> values);

  const LatticeWindow& window() const noexcept { return window_; }
  std::size_t sites() const noexcept { return static_cast<std::size_t>(window_.sites()); }

  double at(std::size_t i, std::size_t j) const { return values_[i * sites() + j]; }
  // Lookup by lattice position.
  double operator()(int xa, int xb) const {
    return at(window_.site_index(xa), window_.site_index(xb));
  }

  std::span<const double> values() const noexcept { return values_; }
  double total() const noexcept;

 private:
  LatticeWindow window_;
  std::vector<double> values_;
};

JointDistribution joint_distribution_direct(const TwoParticleState& s);

// One particle evolved separately from coin |0> and from coin |1> at x0.
struct CoinBasisEvolution {
  SingleParticleState from_coin0;
  SingleParticleState from_coin1;
  int steps = 0;
};

CoinBasisEvolution evolve_coin_basis(LatticeWindow window, int x0, const AngleField& field,
                                     int steps);

enum class InterferenceSign { plus, minus };

// P+-(i, j) = 1/2 (P_0^A(i) P_1^B(j) + P_1^A(i) P_0^B(j)
//                  +- [I_10^A(i) I_01^B(j) + I_01^A(i) I_10^B(j)])
// with I_10(i) = sum_c conj(psi_1(i, c)) psi_0(i, c) and I_01 = conj(I_10),
// psi_c the walker started from coin c. This is the joint distribution of the
// pair started in (|01> +- |10>)/sqrt2.
JointDistribution joint_distribution_interference(const CoinBasisEvolution& a,
                                                  const CoinBasisEvolution& b,
                                                  InterferenceSign sign);

struct EntropySeries {
  std::vector<int> steps;
  std::vector<double> entropy_bits;
};

struct PairTrajectory {
  EntropySeries entropy;
  TwoParticleState final_state;
};

// Evolves and records S(rho_c) of the 4x4 coin reduction at every step.
PairTrajectory pair_entropy_series(TwoParticleState s, const AngleField& field_a,
                                   const AngleField& field_b, int steps);

// Row sums (particle A) and column sums (particle B).
std::pair<std::vector<double>, std::vector<double>> marginals(const JointDistribution& p);

}  // namespace qwalk
