#include "qwalk/pair.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr double kNormDriftTolerance = 1e-10;
constexpr double kClipTolerance = 1e-12;
constexpr double kInterferenceNormTolerance = 1e-8;

}  // namespace

TwoParticleState make_pair_state(const InitialPairState& init, LatticeWindow window) {
  for (int x : {init.xa, init.xb}) {
    if (std::abs(x) >= window.half_width()) {
      throw std::invalid_argument("pair position " + std::to_string(x) +
                                  " is not strictly inside the window");
    }
  }
  TwoParticleState s(window);
  const double h = 1.0 / std::sqrt(2.0);
  switch (init.kind) {
    case PairStateKind::separable:
      s(init.xa, 0, init.xb, 1) = 1.0;
      break;
    case PairStateKind::psi_plus:
      s(init.xa, 0, init.xb, 1) = h;
      s(init.xa, 1, init.xb, 0) = h;
      break;
    case PairStateKind::psi_minus:
      s(init.xa, 0, init.xb, 1) = h;
      s(init.xa, 1, init.xb, 0) = -h;
      break;
  }
  return s;
}

TwoParticleState evolve_pair(TwoParticleState s, const AngleField& field_a,
                             const AngleField& field_b, int steps,
                             std::span<const PairObserver> observers) {
  if (steps < 0) throw std::invalid_argument("step count must be >= 0");
  if (field_a.steps() < steps || field_b.steps() < steps) {
    throw std::invalid_argument("angle fields cover fewer steps than requested");
  }
  const double norm0 = s.norm_squared();
  for (const PairObserver& observe : observers) observe(0, s);
  for (int t = 0; t < steps; ++t) {
    split_step(s, Particle::a, field_a, t);
    split_step(s, Particle::b, field_b, t);
    const double drift = std::abs(s.norm_squared() - norm0);
    if (drift > kNormDriftTolerance) {
      throw NumericalError("pair norm drift " + std::to_string(drift) + " after step " +
                           std::to_string(t + 1));
    }
    for (const PairObserver& observe : observers) observe(t + 1, s);
  }
  return s;
}

JointDistribution::JointDistribution(LatticeWindow window, std::vector<double> values)
    : window_(window), values_(std::move(values)) {
  if (values_.size() != sites() * sites()) {
    throw std::invalid_argument("joint distribution size does not match window");
  }
  for (double v : values_) {
    if (!(v >= 0.0)) throw std::invalid_argument("joint distribution has a negative entry");
  }
}

double JointDistribution::total() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

JointDistribution joint_distribution_direct(const TwoParticleState& s) {
  const auto amps = s.amplitudes();
  const std::size_t dim = s.particle_dim();
  const std::size_t sites = dim / kCoinDim;
  std::vector<double> p(sites * sites, 0.0);
  for (std::size_t ra = 0; ra < dim; ++ra) {
    const std::size_t i = ra / kCoinDim;
    const Complex* row = &amps[ra * dim];
    for (std::size_t rb = 0; rb < dim; ++rb) p[i * sites + rb / kCoinDim] += std::norm(row[rb]);
  }
  return JointDistribution(s.window(), std::move(p));
}

CoinBasisEvolution evolve_coin_basis(LatticeWindow window, int x0, const AngleField& field,
                                     int steps) {
  const Stepper stepper = [&field](SingleParticleState& st, int t) { split_step(st, field, t); };
  return {evolve(make_single_state(window, x0, {1.0, 0.0}), stepper, steps),
          evolve(make_single_state(window, x0, {0.0, 1.0}), stepper, steps), steps};
}

JointDistribution joint_distribution_interference(const CoinBasisEvolution& a,
                                                  const CoinBasisEvolution& b,
                                                  InterferenceSign sign) {
  if (a.steps != b.steps) {
    throw std::invalid_argument("interference terms need equal step counts (" +
                                std::to_string(a.steps) + " vs " + std::to_string(b.steps) + ")");
  }
  if (!(a.from_coin0.window() == b.from_coin0.window())) {
    throw std::invalid_argument("interference terms need equal windows");
  }
  const LatticeWindow window = a.from_coin0.window();
  const auto sites = static_cast<std::size_t>(window.sites());

  struct Terms {
    std::vector<double> p0, p1;
    std::vector<Complex> i10;  // <psi_1| P_i |psi_0>
  };
  const auto terms_of = [sites](const CoinBasisEvolution& e) {
    Terms t{position_distribution(e.from_coin0), position_distribution(e.from_coin1),
            std::vector<Complex>(sites)};
    const auto s0 = e.from_coin0.amplitudes();
    const auto s1 = e.from_coin1.amplitudes();
    for (std::size_t i = 0; i < sites; ++i) {
      for (int c = 0; c < kCoinDim; ++c) {
        const std::size_t k = i * kCoinDim + static_cast<std::size_t>(c);
        t.i10[i] += std::conj(s1[k]) * s0[k];
      }
    }
    return t;
  };
  const Terms ta = terms_of(a);
  const Terms tb = terms_of(b);
  const double sgn = sign == InterferenceSign::plus ? 1.0 : -1.0;

  std::vector<double> p(sites * sites);
  for (std::size_t i = 0; i < sites; ++i) {
    const Complex ia10 = ta.i10[i];
    const Complex ia01 = std::conj(ia10);
    for (std::size_t j = 0; j < sites; ++j) {
      const Complex ib10 = tb.i10[j];
      const Complex ib01 = std::conj(ib10);
      const double direct = ta.p0[i] * tb.p1[j] + ta.p1[i] * tb.p0[j];
      const double cross = (ia10 * ib01 + ia01 * ib10).real();
      double v = 0.5 * (direct + sgn * cross);
      if (v < 0.0) {
        if (v < -kClipTolerance) {
          throw NumericalError("interference formula produced P = " + std::to_string(v));
        }
        v = 0.0;
      }
      p[i * sites + j] = v;
    }
  }
  JointDistribution result(window, std::move(p));
  const double total = result.total();
  if (std::abs(total - 1.0) > kInterferenceNormTolerance) {
    throw NumericalError("interference joint distribution sums to " + std::to_string(total));
  }
  return result;
}

PairTrajectory pair_entropy_series(TwoParticleState s, const AngleField& field_a,
                                   const AngleField& field_b, int steps) {
  EntropySeries series;
  const PairObserver record = [&series](int step, const TwoParticleState& st) {
    series.steps.push_back(step);
    series.entropy_bits.push_back(von_neumann_entropy(reduce_to_coin(st)));
  };
  TwoParticleState final_state =
      evolve_pair(std::move(s), field_a, field_b, steps, std::span(&record, 1));
  return {std::move(series), std::move(final_state)};
}

std::pair<std::vector<double>, std::vector<double>> marginals(const JointDistribution& p) {
  const std::size_t n = p.sites();
  std::vector<double> row(n, 0.0);
  std::vector<double> col(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p.at(i, j);
      row[i] += v;
      col[j] += v;
    }
  }
  return {std::move(row), std::move(col)};
}

}  // namespace qwalk
