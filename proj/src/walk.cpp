#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/random.hpp"

namespace qwalk {

namespace {

constexpr double kUnitaryTolerance = 1e-12;
constexpr double kBoundaryTolerance = 1e-14;
constexpr double kNormDriftTolerance = 1e-10;

struct Mat2 {
  Complex m00, m01, m10, m11;
};

Mat2 to_mat2(const CoinOperator& c) { return {c(0, 0), c(0, 1), c(1, 0), c(1, 1)}; }

// One particle's (site, coin) axis inside a flat amplitude array:
// index = ((o * sites + site) * 2 + coin) * inner + r.
struct Axis {
  Complex* data;
  std::size_t outer;
  std::size_t sites;
  std::size_t inner;

  Complex& at(std::size_t o, std::size_t site, int coin, std::size_t r) const {
    return data[((o * sites + site) * kCoinDim + static_cast<std::size_t>(coin)) * inner + r];
  }
};

Axis axis_of(SingleParticleState& s) {
  return {s.amplitudes().data(), 1, static_cast<std::size_t>(s.window().sites()), 1};
}

Axis axis_of(TwoParticleState& s, Particle p) {
  const auto sites = static_cast<std::size_t>(s.window().sites());
  const std::size_t dim = s.particle_dim();
  if (p == Particle::a) return {s.amplitudes().data(), 1, sites, dim};
  return {s.amplitudes().data(), dim, sites, 1};
}

template <typename CoinAt>
void apply_site_coins(const Axis& ax, CoinAt&& coin_at) {
  for (std::size_t o = 0; o < ax.outer; ++o) {
    for (std::size_t site = 0; site < ax.sites; ++site) {
      const Mat2 c = coin_at(site);
      for (std::size_t r = 0; r < ax.inner; ++r) {
        Complex& a0 = ax.at(o, site, 0, r);
        Complex& a1 = ax.at(o, site, 1, r);
        const Complex n0 = c.m00 * a0 + c.m01 * a1;
        const Complex n1 = c.m10 * a0 + c.m11 * a1;
        a0 = n0;
        a1 = n1;
      }
    }
  }
}

// Real rotation R(theta) per site; cos/sin of theta/2 precomputed.
void apply_rotations(const Axis& ax, std::span<const double> thetas) {
  std::vector<double> cs(thetas.size());
  std::vector<double> sn(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    cs[i] = std::cos(thetas[i] / 2);
    sn[i] = std::sin(thetas[i] / 2);
  }
  for (std::size_t o = 0; o < ax.outer; ++o) {
    for (std::size_t site = 0; site < ax.sites; ++site) {
      const double c = cs[site];
      const double s = sn[site];
      for (std::size_t r = 0; r < ax.inner; ++r) {
        Complex& a0 = ax.at(o, site, 0, r);
        Complex& a1 = ax.at(o, site, 1, r);
        const Complex n0 = c * a0 - s * a1;
        const Complex n1 = s * a0 + c * a1;
        a0 = n0;
        a1 = n1;
      }
    }
  }
}

void check_outgoing(const Complex& amp, const char* which) {
  if (std::abs(amp) >= kBoundaryTolerance) {
    throw BoundaryError(std::string(which) + ": amplitude " + std::to_string(std::abs(amp)) +
                        " at the lattice edge; window too small");
  }
}

void shift_right_coin0(const Axis& ax) {
  const std::size_t last = ax.sites - 1;
  for (std::size_t o = 0; o < ax.outer; ++o) {
    for (std::size_t r = 0; r < ax.inner; ++r) check_outgoing(ax.at(o, last, 0, r), "T0");
    for (std::size_t site = last; site > 0; --site) {
      for (std::size_t r = 0; r < ax.inner; ++r) ax.at(o, site, 0, r) = ax.at(o, site - 1, 0, r);
    }
    for (std::size_t r = 0; r < ax.inner; ++r) ax.at(o, 0, 0, r) = Complex{};
  }
}

void shift_left_coin1(const Axis& ax) {
  const std::size_t last = ax.sites - 1;
  for (std::size_t o = 0; o < ax.outer; ++o) {
    for (std::size_t r = 0; r < ax.inner; ++r) check_outgoing(ax.at(o, 0, 1, r), "T1");
    for (std::size_t site = 0; site < last; ++site) {
      for (std::size_t r = 0; r < ax.inner; ++r) ax.at(o, site, 1, r) = ax.at(o, site + 1, 1, r);
    }
    for (std::size_t r = 0; r < ax.inner; ++r) ax.at(o, last, 1, r) = Complex{};
  }
}

void split_step_axis(const Axis& ax, const AngleField& field, int step) {
  if (step < 0 || step >= field.steps()) {
    throw std::out_of_range("angle field has no step " + std::to_string(step));
  }
  if (static_cast<std::size_t>(field.window().sites()) != ax.sites) {
    throw std::invalid_argument("angle field window does not match the state window");
  }
  apply_rotations(ax, field.theta1_at(step));
  shift_right_coin0(ax);
  apply_rotations(ax, field.theta2_at(step));
  shift_left_coin1(ax);
}

}  // namespace

CoinOperator::CoinOperator(const Eigen::Matrix2cd& entries) : entries_(entries) {
  const double deviation =
      (entries_.adjoint() * entries_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(deviation < kUnitaryTolerance)) {
    throw std::invalid_argument("coin operator is not unitary (deviation " +
                                std::to_string(deviation) + ")");
  }
}

CoinOperator hadamard_coin() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << h, h, h, -h;
  return CoinOperator(m);
}

CoinOperator rotation_coin(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rotation angle must be finite");
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return CoinOperator(m);
}

AngleField::AngleField(LatticeWindow window, int steps)
    : window_(window),
      steps_(steps),
      theta1_(static_cast<std::size_t>(window.sites()) * static_cast<std::size_t>(steps < 0 ? 0 : steps)),
      theta2_(theta1_.size()) {
  if (steps < 0) throw std::invalid_argument("angle field step count must be >= 0");
}

AngleField AngleField::constant(LatticeWindow window, int steps, AnglePair angles) {
  AngleField field(window, steps);
  std::fill(field.theta1_.begin(), field.theta1_.end(), angles.theta1);
  std::fill(field.theta2_.begin(), field.theta2_.end(), angles.theta2);
  return field;
}

std::size_t AngleField::offset(int x, int step) const {
  if (step < 0 || step >= steps_ || !window_.contains(x)) {
    throw std::out_of_range("angle field index (x=" + std::to_string(x) +
                            ", step=" + std::to_string(step) + ") out of range");
  }
  return static_cast<std::size_t>(step) * static_cast<std::size_t>(window_.sites()) +
         window_.site_index(x);
}

std::span<const double> AngleField::theta1_at(int step) const {
  const auto sites = static_cast<std::size_t>(window_.sites());
  return std::span<const double>(theta1_).subspan(static_cast<std::size_t>(step) * sites, sites);
}

std::span<const double> AngleField::theta2_at(int step) const {
  const auto sites = static_cast<std::size_t>(window_.sites());
  return std::span<const double>(theta2_).subspan(static_cast<std::size_t>(step) * sites, sites);
}

bool DisorderSpec::applies_to(Particle p) const noexcept {
  if (kind == DisorderKind::none) return false;
  switch (target) {
    case DisorderTarget::a: return p == Particle::a;
    case DisorderTarget::b: return p == Particle::b;
    case DisorderTarget::both: return true;
  }
  return false;
}

AngleField sample_angle_field(AnglePair base, const DisorderSpec& disorder, int steps,
                              LatticeWindow window, Particle particle) {
  return apply_disorder(AngleField::constant(window, steps, base), disorder, particle);
}

AngleField boundary_angle_field(const BoundarySpec& boundary, int steps, LatticeWindow window) {
  AngleField field(window, steps);
  for (int t = 0; t < steps; ++t) {
    for (int x = window.min_x(); x <= window.max_x(); ++x) {
      const bool minus = x < 0 || (x == 0 && boundary.origin == OriginSide::minus);
      const AnglePair& side = minus ? boundary.minus : boundary.plus;
      field.theta1(x, t) = side.theta1;
      field.theta2(x, t) = side.theta2;
    }
  }
  return field;
}

AngleField apply_disorder(AngleField field, const DisorderSpec& disorder, Particle particle) {
  if (!(disorder.half_width >= 0.0)) {
    throw std::invalid_argument("disorder half width must be >= 0");
  }
  if (!disorder.applies_to(particle)) return field;
  const double w = disorder.half_width;
  const auto particle_key = static_cast<std::uint64_t>(particle);
  const LatticeWindow window = field.window();
  for (int t = 0; t < field.steps(); ++t) {
    for (int x = window.min_x(); x <= window.max_x(); ++x) {
      const auto step_key = static_cast<std::uint64_t>(t);
      const auto site_key = static_cast<std::uint64_t>(static_cast<std::int64_t>(x));
      const double u1 = keyed_uniform(disorder.seed, {particle_key, 0, step_key, site_key});
      const double u2 = keyed_uniform(disorder.seed, {particle_key, 1, step_key, site_key});
      field.theta1(x, t) += w * (2.0 * u1 - 1.0);
      field.theta2(x, t) += w * (2.0 * u2 - 1.0);
    }
  }
  return field;
}

void apply_coin(SingleParticleState& s, const CoinField& coin_at, int step) {
  const LatticeWindow window = s.window();
  apply_site_coins(axis_of(s), [&](std::size_t site) {
    return to_mat2(coin_at(window.position(site), step));
  });
}

void shift_t0(SingleParticleState& s) { shift_right_coin0(axis_of(s)); }

void shift_t1(SingleParticleState& s) { shift_left_coin1(axis_of(s)); }

void hadamard_step(SingleParticleState& s) {
  const Mat2 h = to_mat2(hadamard_coin());
  const Axis ax = axis_of(s);
  apply_site_coins(ax, [&](std::size_t) { return h; });
  shift_right_coin0(ax);
  shift_left_coin1(ax);
}

void split_step(SingleParticleState& s, const AngleField& field, int step) {
  split_step_axis(axis_of(s), field, step);
}

void split_step(TwoParticleState& s, Particle particle, const AngleField& field, int step) {
  split_step_axis(axis_of(s, particle), field, step);
}

Stepper hadamard_stepper() {
  return [](SingleParticleState& s, int) { hadamard_step(s); };
}

Stepper split_stepper(AngleField field) {
  return [field = std::move(field)](SingleParticleState& s, int step) {
    split_step(s, field, step);
  };
}

SingleParticleState evolve(SingleParticleState s, const Stepper& stepper, int steps,
                           std::span<const Observer> observers) {
  if (steps < 0) throw std::invalid_argument("step count must be >= 0");
  const double norm0 = s.norm_squared();
  for (const Observer& observe : observers) observe(0, s);
  for (int t = 0; t < steps; ++t) {
    stepper(s, t);
    const double drift = std::abs(s.norm_squared() - norm0);
    if (drift > kNormDriftTolerance) {
      throw NumericalError("norm drift " + std::to_string(drift) + " after step " +
                           std::to_string(t + 1));
    }
    for (const Observer& observe : observers) observe(t + 1, s);
  }
  return s;
}

Trajectory record_evolution(SingleParticleState s, const Stepper& stepper, int steps,
                            bool keep_distributions) {
  std::vector<double> entropy;
  std::vector<std::vector<double>> distributions;
  entropy.reserve(static_cast<std::size_t>(steps < 0 ? 0 : steps) + 1);
  std::vector<Observer> observers;
  observers.emplace_back([&](int, const SingleParticleState& st) {
    entropy.push_back(von_neumann_entropy(reduce_to_coin(st)));
  });
  if (keep_distributions) {
    observers.emplace_back([&](int, const SingleParticleState& st) {
      distributions.push_back(position_distribution(st));
    });
  }
  SingleParticleState final_state = evolve(std::move(s), stepper, steps, observers);
  return {std::move(entropy), std::move(distributions), std::move(final_state)};
}

}  // namespace qwalk
