// qwalk: command-line driver for split-step quantum walk experiments.
//
//   qwalk walk          single walker (hadamard or split-step)
//   qwalk pair          two walkers (tptpw or tptbw)
//   qwalk sweep         entropy heatmap over two parameters
//   qwalk phase-diagram winding number over (theta1, theta2)
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error, 1 other.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/experiment.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<int> window;
  std::optional<std::string> kind;
  std::optional<std::string> disorder;
  std::optional<std::string> disorder_target;
  std::optional<std::string> state;
  std::optional<std::string> theta1a, theta2a, theta1b, theta2b;
  std::optional<std::string> boundary;
  std::optional<std::string> boundary_origin;
  std::optional<std::string> coin;
  std::optional<int> ensemble;
  std::vector<std::string> axes;
  std::optional<std::string> scalar;
  std::optional<int> grid;
  std::optional<int> k_points;
  std::string out = "out";
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration");
  sub->add_option("--seed", f.seed, "master seed (u64)");
  sub->add_option("--steps", f.steps, "number of walk steps");
  sub->add_option("--window", f.window, "lattice half width (default steps + 1)");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

void add_walk_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--disorder", f.disorder, "none|weak|strong|width=<radians>");
  sub->add_option("--disorder-target", f.disorder_target, "a|b|both");
  sub->add_option("--theta1a", f.theta1a, "theta1 of particle A (radians or k*pi/d)");
  sub->add_option("--theta2a", f.theta2a, "theta2 of particle A");
  sub->add_option("--ensemble", f.ensemble, "number of disorder replicates");
}

void add_pair_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--state", f.state, "psi+|psi-|sep");
  sub->add_option("--theta1b", f.theta1b, "theta1 of particle B");
  sub->add_option("--theta2b", f.theta2b, "theta2 of particle B");
  sub->add_option("--boundary", f.boundary, "t1-,t2-,t1+,t2+ for both particles");
  sub->add_option("--boundary-origin", f.boundary_origin, "side owning x = 0: minus|plus")
      ->check(CLI::IsMember({"minus", "plus"}));
}

qwalk::RunConfig build_config(const std::string& command, const Flags& f) {
  using qwalk::RunKind;
  qwalk::RunConfig c;
  const bool from_file = !f.config_path.empty();
  if (from_file) c = qwalk::load_config(f.config_path);

  const auto in_family = [&](RunKind k) {
    if (command == "walk") return k == RunKind::hadamard || k == RunKind::single_split;
    if (command == "pair") return qwalk::is_pair_walk(k);
    if (command == "sweep") return k == RunKind::entropy_sweep;
    return k == RunKind::phase_diagram;
  };
  if (from_file && !in_family(c.run_kind)) {
    throw qwalk::ConfigError("run_kind", "config run_kind '" + std::string(to_string(c.run_kind)) +
                                             "' does not belong to subcommand '" + command + "'");
  }
  if (!from_file) {
    if (command == "walk") c.run_kind = RunKind::hadamard;
    if (command == "pair") c.run_kind = RunKind::tptpw;
    if (command == "sweep") {
      c.run_kind = RunKind::entropy_sweep;
      c.steps = 50;
    }
    if (command == "phase-diagram") c.run_kind = RunKind::phase_diagram;
  }
  if (f.kind) {
    const RunKind k = qwalk::parse_run_kind(*f.kind, "kind");
    if (command == "sweep") {
      c.sweep_walk = k;
    } else if (!in_family(k)) {
      throw qwalk::ConfigError("kind", "'" + *f.kind + "' is not valid for " + command);
    } else {
      c.run_kind = k;
    }
  }
  if (f.seed) c.master_seed = *f.seed;
  if (f.steps) c.steps = *f.steps;
  if (f.window) c.window = *f.window;
  if (f.disorder) c.disorder = qwalk::parse_disorder(*f.disorder, c.disorder);
  if (f.disorder_target) c.disorder.target = qwalk::parse_disorder_target(*f.disorder_target);
  if (f.state) c.pair_state.kind = qwalk::parse_pair_state(*f.state);
  if (f.theta1a) c.angles_a.theta1 = qwalk::parse_angle(*f.theta1a, "theta1a");
  if (f.theta2a) c.angles_a.theta2 = qwalk::parse_angle(*f.theta2a, "theta2a");
  if (f.theta1b) c.angles_b.theta1 = qwalk::parse_angle(*f.theta1b, "theta1b");
  if (f.theta2b) c.angles_b.theta2 = qwalk::parse_angle(*f.theta2b, "theta2b");
  if (f.boundary) {
    const qwalk::OriginSide origin = c.boundary_a.origin;
    c.boundary_a = c.boundary_b = qwalk::parse_boundary(*f.boundary);
    c.boundary_a.origin = c.boundary_b.origin = origin;
  }
  if (f.boundary_origin) {
    c.boundary_a.origin = c.boundary_b.origin =
        *f.boundary_origin == "minus" ? qwalk::OriginSide::minus : qwalk::OriginSide::plus;
  }
  if (f.coin) c.coin = qwalk::parse_coin(*f.coin);
  if (f.ensemble) c.ensemble_size = *f.ensemble;
  if (!f.axes.empty()) {
    c.sweep_grid.clear();
    for (const std::string& a : f.axes) c.sweep_grid.push_back(qwalk::parse_sweep_axis(a));
  }
  if (f.scalar) c.sweep_scalar = qwalk::parse_sweep_scalar(*f.scalar);
  if (f.grid) c.phase_grid = *f.grid;
  if (f.k_points) c.k_points = *f.k_points;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step quantum walk experiments"};
  app.require_subcommand(1);
  Flags flags;

  auto* walk = app.add_subcommand("walk", "single-particle walk");
  add_common(walk, flags);
  add_walk_flags(walk, flags);
  walk->add_option("--kind", flags.kind, "hadamard|split");
  walk->add_option("--coin", flags.coin, "initial coin amplitudes re0,im0,re1,im1");

  auto* pair = app.add_subcommand("pair", "two-particle walk");
  add_common(pair, flags);
  add_walk_flags(pair, flags);
  add_pair_flags(pair, flags);
  pair->add_option("--kind", flags.kind, "tptpw|tptbw");

  auto* sweep = app.add_subcommand("sweep", "entropy heatmap over two parameters");
  add_common(sweep, flags);
  add_walk_flags(sweep, flags);
  add_pair_flags(sweep, flags);
  sweep->add_option("--kind", flags.kind, "cell walk: tptpw|tptbw");
  sweep->add_option("--axis", flags.axes, "name:min:max:count (give twice)");
  sweep->add_option("--scalar", flags.scalar, "final|mean");

  auto* phase = app.add_subcommand("phase-diagram", "winding number phase diagram");
  add_common(phase, flags);
  phase->add_option("--grid", flags.grid, "grid points per axis (>= 16)");
  phase->add_option("--k-points", flags.k_points, "Brillouin-zone samples (>= 64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const qwalk::RunConfig config = build_config(command, flags);
    const qwalk::RunArtifacts artifacts = qwalk::run(config, {flags.threads});
    for (const auto& path : qwalk::write_artifacts(artifacts, config, flags.out)) {
      std::cout << path.string() << '\n';
    }
  } catch (const qwalk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qwalk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
