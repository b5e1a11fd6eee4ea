#include "qwalk/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/random.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "unknown"
#endif

namespace qwalk {

using nlohmann::json;

namespace {

struct SingleResult {
  std::vector<double> entropy;
  std::vector<double> distribution;
};

struct PairResult {
  std::vector<double> entropy;
  JointDistribution joint;
};

DisorderSpec seeded(DisorderSpec d, std::uint64_t seed) {
  d.seed = seed;
  return d;
}

SingleResult run_single(const RunConfig& c, std::uint64_t seed) {
  const LatticeWindow window(c.resolved_half_width());
  Stepper stepper = c.run_kind == RunKind::hadamard
                        ? hadamard_stepper()
                        : split_stepper(sample_angle_field(c.angles_a, seeded(c.disorder, seed),
                                                           c.steps, window, Particle::a));
  Trajectory t = record_evolution(make_single_state(window, c.position, c.coin), stepper, c.steps);
  return {std::move(t.entropy_bits), position_distribution(t.final_state)};
}

PairResult run_pair(const RunConfig& c, RunKind walk, std::uint64_t seed) {
  const LatticeWindow window(c.resolved_half_width());
  const DisorderSpec disorder = seeded(c.disorder, seed);
  const auto field_for = [&](Particle p) {
    if (walk == RunKind::tptbw) {
      const BoundarySpec& b = p == Particle::a ? c.boundary_a : c.boundary_b;
      return apply_disorder(boundary_angle_field(b, c.steps, window), disorder, p);
    }
    return sample_angle_field(p == Particle::a ? c.angles_a : c.angles_b, disorder, c.steps,
                              window, p);
  };
  const AngleField field_a = field_for(Particle::a);
  const AngleField field_b = field_for(Particle::b);
  PairTrajectory t =
      pair_entropy_series(make_pair_state(c.pair_state, window), field_a, field_b, c.steps);
  return {std::move(t.entropy.entropy_bits), joint_distribution_direct(t.final_state)};
}

EntropyTable summarize(const std::vector<std::vector<double>>& series) {
  EntropyTable table;
  const std::size_t n = series.front().size();
  const auto replicates = static_cast<double>(series.size());
  table.steps.resize(n);
  table.mean_bits.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    table.steps[t] = static_cast<int>(t);
    for (const auto& s : series) table.mean_bits[t] += s[t];
    table.mean_bits[t] /= replicates;
  }
  if (series.size() > 1) {
    table.std_bits.assign(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      double ss = 0.0;
      for (const auto& s : series) ss += (s[t] - table.mean_bits[t]) * (s[t] - table.mean_bits[t]);
      table.std_bits[t] = std::sqrt(ss / (replicates - 1.0));
    }
  }
  return table;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<std::uint64_t> replicate_seeds(std::uint64_t parent, int count) {
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < count; ++r) seeds.push_back(replicate_seed(parent, r));
  return seeds;
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t parent_seed, int replicate) {
  return derive_seed(parent_seed, static_cast<std::uint64_t>(replicate));
}

double sweep_scalar(const std::vector<double>& entropy_bits, SweepScalar scalar) {
  if (entropy_bits.empty()) throw std::invalid_argument("empty entropy series");
  if (scalar == SweepScalar::final_step) return entropy_bits.back();
  const std::size_t last_step = entropy_bits.size() - 1;
  const std::size_t first = last_step - last_step / 4;
  double sum = 0.0;
  for (std::size_t t = first; t <= last_step; ++t) sum += entropy_bits[t];
  return sum / static_cast<double>(last_step - first + 1);
}

Heatmap entropy_sweep(const RunConfig& config, const RunOptions& options) {
  if (config.sweep_grid.size() != 2) throw ConfigError("sweep_grid", "needs exactly two axes");
  RunConfig checked = config;
  checked.run_kind = RunKind::entropy_sweep;
  validate(checked);

  Heatmap map{config.sweep_grid[0], config.sweep_grid[1], {}};
  const auto n1 = static_cast<std::size_t>(map.axis1.count);
  const auto n2 = static_cast<std::size_t>(map.axis2.count);
  map.values.assign(n1 * n2, 0.0);
  parallel_for(
      n1 * n2,
      [&](std::size_t cell) {
        RunConfig cell_config = config;
        cell_config.run_kind = config.sweep_walk;
        const int i = static_cast<int>(cell / n2);
        const int j = static_cast<int>(cell % n2);
        set_parameter(cell_config, map.axis1.parameter,
                      grid_value(map.axis1.min, map.axis1.max, i, map.axis1.count));
        set_parameter(cell_config, map.axis2.parameter,
                      grid_value(map.axis2.min, map.axis2.max, j, map.axis2.count));
        const std::uint64_t cell_seed = derive_seed(config.master_seed, cell);
        double total = 0.0;
        for (int r = 0; r < config.ensemble_size; ++r) {
          const PairResult result = run_pair(cell_config, config.sweep_walk, replicate_seed(cell_seed, r));
          total += sweep_scalar(result.entropy, config.sweep_scalar);
        }
        map.values[cell] = total / config.ensemble_size;
      },
      options.threads);
  return map;
}

RunArtifacts run(const RunConfig& config, const RunOptions& options) {
  validate(config);
  RunArtifacts out;
  out.manifest["config"] = to_json(config);
  out.manifest["master_seed"] = config.master_seed;
  out.manifest["code_version"] = QWALK_VERSION;
  out.manifest["started_at"] = utc_now();

  const std::size_t replicates = static_cast<std::size_t>(config.ensemble_size);
  switch (config.run_kind) {
    case RunKind::hadamard:
    case RunKind::single_split: {
      const auto seeds = replicate_seeds(config.master_seed, config.ensemble_size);
      std::vector<SingleResult> results(replicates);
      parallel_for(replicates, [&](std::size_t r) { results[r] = run_single(config, seeds[r]); },
                   options.threads);
      std::vector<std::vector<double>> series;
      PositionDistribution dist{LatticeWindow(config.resolved_half_width()), {}};
      dist.probability.assign(results.front().distribution.size(), 0.0);
      for (const SingleResult& r : results) {
        series.push_back(r.entropy);
        for (std::size_t x = 0; x < r.distribution.size(); ++x) dist.probability[x] += r.distribution[x];
      }
      for (double& p : dist.probability) p /= static_cast<double>(replicates);
      out.entropy = summarize(series);
      out.distribution = std::move(dist);
      out.manifest["replicate_seeds"] = seeds;
      break;
    }
    case RunKind::tptpw:
    case RunKind::tptbw: {
      const auto seeds = replicate_seeds(config.master_seed, config.ensemble_size);
      std::vector<std::optional<PairResult>> results(replicates);
      parallel_for(replicates,
                   [&](std::size_t r) { results[r] = run_pair(config, config.run_kind, seeds[r]); },
                   options.threads);
      std::vector<std::vector<double>> series;
      const LatticeWindow window(config.resolved_half_width());
      std::vector<double> joint(static_cast<std::size_t>(window.sites() * window.sites()), 0.0);
      for (const auto& r : results) {
        series.push_back(r->entropy);
        const auto values = r->joint.values();
        for (std::size_t k = 0; k < joint.size(); ++k) joint[k] += values[k];
      }
      for (double& p : joint) p /= static_cast<double>(replicates);
      out.entropy = summarize(series);
      out.joint = JointDistribution(window, std::move(joint));
      out.manifest["replicate_seeds"] = seeds;
      break;
    }
    case RunKind::entropy_sweep:
      out.heatmap = entropy_sweep(config, options);
      out.manifest["sweep_scalar"] = to_string(config.sweep_scalar);
      out.manifest["sweep_axes"] = {config.sweep_grid[0].parameter, config.sweep_grid[1].parameter};
      break;
    case RunKind::phase_diagram:
      out.phase = phase_diagram(config.phase_grid, config.k_points);
      out.manifest["gap_threshold"] = kGapThreshold;
      break;
  }
  out.manifest["finished_at"] = utc_now();
  return out;
}

}  // namespace qwalk
