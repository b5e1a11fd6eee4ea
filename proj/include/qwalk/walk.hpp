#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/lattice.hpp"

namespace qwalk {

// 2x2 unitary acting on the coin of one site.
class CoinOperator {
 public:
  // Throws std::invalid_argument unless ||C^dagger C - I||_max < 1e-12.
  explicit CoinOperator(const Eigen::Matrix2cd& entries);

  static CoinOperator identity() { return CoinOperator(Eigen::Matrix2cd::Identity()); }

  const Eigen::Matrix2cd& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

 private:
  Eigen::Matrix2cd entries_;
};

CoinOperator hadamard_coin();

// R(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
CoinOperator rotation_coin(double theta);

enum class Particle { a, b };

struct AnglePair {
  double theta1 = 0.0;
  double theta2 = 0.0;
  friend bool operator==(const AnglePair&, const AnglePair&) = default;
};

// Reference angles of the two phases used throughout: winding 1 and winding 0.
inline constexpr AnglePair kWindingOneAngles{-std::numbers::pi / 2, std::numbers::pi / 4};
inline constexpr AnglePair kWindingZeroAngles{-std::numbers::pi / 2, 3 * std::numbers::pi / 4};

// Per-site, per-step split-step angles for one particle.
class AngleField {
 public:
  AngleField(LatticeWindow window, int steps);

  static AngleField constant(LatticeWindow window, int steps, AnglePair angles);

  const LatticeWindow& window() const noexcept { return window_; }
  int steps() const noexcept { return steps_; }

  double theta1(int x, int step) const { return theta1_[offset(x, step)]; }
  double theta2(int x, int step) const { return theta2_[offset(x, step)]; }
  double& theta1(int x, int step) { return theta1_[offset(x, step)]; }
  double& theta2(int x, int step) { return theta2_[offset(x, step)]; }

  // Angles of one step, indexed by window site.
  std::span<const double> theta1_at(int step) const;
  std::span<const double> theta2_at(int step) const;

  friend bool operator==(const AngleField&, const AngleField&) = default;

 private:
  std::size_t offset(int x, int step) const;

  LatticeWindow window_;
  int steps_;
  std::vector<double> theta1_;
  std::vector<double> theta2_;
};

enum class DisorderKind { none, uniform };
enum class DisorderTarget { a, b, both };

inline constexpr double kWeakDisorderHalfWidth = 0.1 * std::numbers::pi;
inline constexpr double kStrongDisorderHalfWidth = 2.0 * std::numbers::pi;

struct DisorderSpec {
  DisorderKind kind = DisorderKind::none;
  double half_width = 0.0;
  DisorderTarget target = DisorderTarget::a;
  std::uint64_t seed = 0;

  static DisorderSpec weak(std::uint64_t seed, DisorderTarget target = DisorderTarget::a) {
    return {DisorderKind::uniform, kWeakDisorderHalfWidth, target, seed};
  }
  static DisorderSpec strong(std::uint64_t seed, DisorderTarget target = DisorderTarget::a) {
    return {DisorderKind::uniform, kStrongDisorderHalfWidth, target, seed};
  }

  bool applies_to(Particle p) const noexcept;
};

// Which phase owns the site x = 0.
enum class OriginSide { minus, plus };

// Angles for x < 0 (minus) and x > 0 (plus); x = 0 follows `origin`.
// Putting the origin on the minus side leaves the walkers' starting site
// inside the winding-1 region, which is where the bound state forms.
struct BoundarySpec {
  AnglePair minus;
  AnglePair plus;
  OriginSide origin = OriginSide::minus;
};

// Constant field at `base`, with i.i.d. uniform noise on [-w, w] added to
// theta1 and theta2 independently at every (site, step) when the disorder
// targets `particle`.
AngleField sample_angle_field(AnglePair base, const DisorderSpec& disorder, int steps,
                              LatticeWindow window, Particle particle = Particle::a);

AngleField boundary_angle_field(const BoundarySpec& boundary, int steps, LatticeWindow window);

// Adds disorder noise to an arbitrary base field (used for disordered
// boundary walks). Draws are keyed by (seed, particle, substep, step, x).
AngleField apply_disorder(AngleField field, const DisorderSpec& disorder, Particle particle);

// Site-dependent coin: (x, step) -> operator.
using CoinField = std::function<CoinOperator(int x, int step)>;

void apply_coin(SingleParticleState& s, const CoinField& coin_at, int step);

// T0 moves coin-0 amplitude x -> x+1; T1 moves coin-1 amplitude x -> x-1.
// Both throw BoundaryError if amplitude would leave the window.
void shift_t0(SingleParticleState& s);
void shift_t1(SingleParticleState& s);

// U = T (I (x) H).
void hadamard_step(SingleParticleState& s);

// U_ss = T1 R(theta2) T0 R(theta1), each coin read at the amplitude's current site.
void split_step(SingleParticleState& s, const AngleField& field, int step);

// Same step applied to one particle's indices of a pair state.
void split_step(TwoParticleState& s, Particle particle, const AngleField& field, int step);

using Stepper = std::function<void(SingleParticleState&, int step)>;
using Observer = std::function<void(int step, const SingleParticleState&)>;

Stepper hadamard_stepper();
Stepper split_stepper(AngleField field);

// Applies `stepper` N times. Every observer sees step 0 (the initial state)
// and the state after each full step. Throws NumericalError on norm drift.
SingleParticleState evolve(SingleParticleState s, const Stepper& stepper, int steps,
                           std::span<const Observer> observers = {});

struct Trajectory {
  std::vector<double> entropy_bits;                // steps + 1 entries
  std::vector<std::vector<double>> distributions;  // empty unless requested
  SingleParticleState final_state;
};

Trajectory record_evolution(SingleParticleState s, const Stepper& stepper, int steps,
                            bool keep_distributions = false);

}  // namespace qwalk
