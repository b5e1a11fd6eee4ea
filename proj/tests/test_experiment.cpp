#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qwalk/errors.hpp"
#include "qwalk/experiment.hpp"
#include "qwalk/random.hpp"

using namespace qwalk;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("qwalk_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

RunConfig pair_config() {
  RunConfig c;
  c.run_kind = RunKind::tptbw;
  c.steps = 20;
  c.disorder = DisorderSpec::strong(0);
  c.ensemble_size = 3;
  c.master_seed = 77;
  return c;
}

RunConfig sweep_config() {
  RunConfig c;
  c.run_kind = RunKind::entropy_sweep;
  c.sweep_walk = RunKind::tptpw;
  c.steps = 8;
  c.disorder = DisorderSpec::weak(0);
  c.master_seed = 5;
  c.sweep_grid = {{"theta1a", -pi, pi, 3}, {"theta2a", -pi / 2, pi / 2, 4}};
  return c;
}

}  // namespace

TEST_CASE("hadamard run") {
  RunConfig c;
  const RunArtifacts a = run(c);
  REQUIRE(a.entropy);
  REQUIRE(a.distribution);
  CHECK(a.entropy->steps.size() == 101);
  CHECK(a.entropy->std_bits.empty());
  CHECK(a.entropy->mean_bits.back() == doctest::Approx(0.8698).epsilon(1e-3));
  double total = 0.0;
  for (double p : a.distribution->probability) total += p;
  CHECK(std::abs(total - 1.0) < 1e-10);
  CHECK(a.manifest["master_seed"] == 0);
  CHECK(a.manifest.contains("code_version"));
  CHECK(a.manifest.contains("started_at"));
}

TEST_CASE("zero steps keeps only the initial snapshot") {
  RunConfig c;
  c.steps = 0;
  const RunArtifacts a = run(c);
  CHECK(a.entropy->steps == std::vector<int>{0});
  CHECK(a.entropy->mean_bits == std::vector<double>{0.0});
  CHECK(a.distribution->probability[a.distribution->window.site_index(0)] == 1.0);

  c.run_kind = RunKind::tptpw;
  const RunArtifacts p = run(c);
  CHECK(p.entropy->mean_bits.size() == 1);
  CHECK((*p.joint)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("runs are deterministic across thread counts") {
  const RunConfig c = pair_config();
  const RunArtifacts one = run(c, {1});
  const RunArtifacts four = run(c, {4});
  const RunArtifacts again = run(c, {1});
  CHECK(one.entropy->mean_bits == four.entropy->mean_bits);
  CHECK(one.entropy->std_bits == four.entropy->std_bits);
  CHECK(std::vector<double>(one.joint->values().begin(), one.joint->values().end()) ==
        std::vector<double>(four.joint->values().begin(), four.joint->values().end()));
  CHECK(one.entropy->mean_bits == again.entropy->mean_bits);
  CHECK(one.entropy->std_bits.size() == 21);

  RunConfig other = c;
  other.master_seed = 78;
  CHECK(run(other, {1}).entropy->mean_bits != one.entropy->mean_bits);

  const RunConfig s = sweep_config();
  CHECK(entropy_sweep(s, {1}).values == entropy_sweep(s, {3}).values);
}

TEST_CASE("ensemble seeds are distinct and recorded") {
  const RunArtifacts a = run(pair_config(), {1});
  const auto seeds = a.manifest["replicate_seeds"].get<std::vector<std::uint64_t>>();
  REQUIRE(seeds.size() == 3);
  CHECK(std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() == 3);
  for (int r = 0; r < 3; ++r) CHECK(seeds[static_cast<std::size_t>(r)] == replicate_seed(77, r));
}

TEST_CASE("ensemble statistics") {
  // Mean and sample std agree with the replicates computed one by one.
  const RunConfig c = pair_config();
  const RunArtifacts a = run(c, {1});
  // Replicates rebuilt by hand from their seeds.
  std::vector<std::vector<double>> series;
  for (int r = 0; r < c.ensemble_size; ++r) {
    const LatticeWindow w(c.resolved_half_width());
    DisorderSpec d = c.disorder;
    d.seed = replicate_seed(c.master_seed, r);
    const auto fa = apply_disorder(boundary_angle_field(c.boundary_a, c.steps, w), d, Particle::a);
    const auto fb = apply_disorder(boundary_angle_field(c.boundary_b, c.steps, w), d, Particle::b);
    series.push_back(pair_entropy_series(make_pair_state(c.pair_state, w), fa, fb, c.steps)
                         .entropy.entropy_bits);
  }
  for (std::size_t t = 0; t < series[0].size(); ++t) {
    const double m = (series[0][t] + series[1][t] + series[2][t]) / 3.0;
    double ss = 0.0;
    for (const auto& s : series) ss += (s[t] - m) * (s[t] - m);
    CHECK(a.entropy->mean_bits[t] == doctest::Approx(m).epsilon(1e-12));
    CHECK(a.entropy->std_bits[t] == doctest::Approx(std::sqrt(ss / 2.0)).epsilon(1e-9));
  }
}

TEST_CASE("artifact files") {
  TempDir dir;
  RunConfig c = pair_config();
  c.steps = 6;
  const RunArtifacts a = run(c, {1});
  const auto written = write_artifacts(a, c, dir.path);
  CHECK(written.size() == 3);

  const auto entropy = read_csv(dir.path / "entropy.csv");
  REQUIRE(entropy.size() == 8);  // header + N+1 rows
  CHECK(entropy[0] == std::vector<std::string>{"step", "entropy_bits", "std"});
  CHECK(entropy[1][1].find('e') != std::string::npos);

  const auto joint = read_csv(dir.path / "joint.csv");
  const int sites = 2 * 7 + 1;
  REQUIRE(joint.size() == static_cast<std::size_t>(sites * sites + 1));
  CHECK(joint[0] == std::vector<std::string>{"i", "j", "probability"});
  CHECK(joint[1][0] == "-7");
  CHECK(joint[2][1] == "-6");  // row-major: j varies fastest
  double total = 0.0;
  for (std::size_t r = 1; r < joint.size(); ++r) total += std::stod(joint[r][2]);
  CHECK(std::abs(total - 1.0) < 1e-8);

  const auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
  CHECK(manifest["master_seed"] == 77);
  CHECK(manifest["files"].size() == 2);

  // The manifest alone re-runs to identical data files.
  const RunConfig again = config_from_json(manifest);
  TempDir dir2;
  write_artifacts(run(again, {2}), again, dir2.path);
  CHECK(slurp(dir.path / "entropy.csv") == slurp(dir2.path / "entropy.csv"));
  CHECK(slurp(dir.path / "joint.csv") == slurp(dir2.path / "joint.csv"));
}

TEST_CASE("single-walker and phase artifacts") {
  TempDir dir;
  RunConfig c;
  c.steps = 10;
  c.outputs = {"distribution"};
  const auto written = write_artifacts(run(c), c, dir.path);
  REQUIRE(written.size() == 1);
  const auto dist = read_csv(dir.path / "distribution.csv");
  CHECK(dist.size() == 24);
  double total = 0.0;
  for (std::size_t r = 1; r < dist.size(); ++r) total += std::stod(dist[r][1]);
  CHECK(std::abs(total - 1.0) < 1e-8);

  RunConfig p;
  p.run_kind = RunKind::phase_diagram;
  p.phase_grid = 16;
  p.k_points = 128;
  write_artifacts(run(p), p, dir.path);
  const auto phase = read_csv(dir.path / "phase.csv");
  REQUIRE(phase.size() == 257);
  CHECK(phase[0] == std::vector<std::string>{"theta1", "theta2", "winding", "gap"});
  std::set<std::string> windings;
  for (std::size_t r = 1; r < phase.size(); ++r) windings.insert(phase[r][2]);
  CHECK(windings == std::set<std::string>{"-1", "0", "1"});
}

TEST_CASE("sweep heatmap") {
  const RunConfig c = sweep_config();
  const Heatmap h = entropy_sweep(c, {1});
  REQUIRE(h.values.size() == 12);
  for (double v : h.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }

  // Each cell equals an independent run with its own derived seed.
  for (int cell : {0, 5, 11}) {
    RunConfig single = c;
    single.run_kind = RunKind::tptpw;
    set_parameter(single, "theta1a", grid_value(-pi, pi, cell / 4, 3));
    set_parameter(single, "theta2a", grid_value(-pi / 2, pi / 2, cell % 4, 4));
    const LatticeWindow w(single.resolved_half_width());
    DisorderSpec d = single.disorder;
    d.seed = replicate_seed(derive_seed(c.master_seed, static_cast<std::uint64_t>(cell)), 0);
    const auto fa = sample_angle_field(single.angles_a, d, single.steps, w, Particle::a);
    const auto fb = sample_angle_field(single.angles_b, d, single.steps, w, Particle::b);
    const auto s = pair_entropy_series(make_pair_state(single.pair_state, w), fa, fb, single.steps);
    CHECK(h.values[static_cast<std::size_t>(cell)] == s.entropy.entropy_bits.back());
  }

  TempDir dir;
  RunConfig full = c;
  const RunArtifacts a = run(full, {1});
  write_artifacts(a, full, dir.path);
  const auto rows = read_csv(dir.path / "heatmap.csv");
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == std::vector<std::string>{"axis1", "axis2", "scalar"});
  CHECK(std::stod(rows[1][0]) == doctest::Approx(-pi));
  CHECK(std::stod(rows[4][1]) == doctest::Approx(pi / 2));
  CHECK(a.manifest["sweep_scalar"] == "final");
}

TEST_CASE("degenerate sweep gives identical cells") {
  RunConfig c;
  c.run_kind = RunKind::entropy_sweep;
  c.steps = 12;
  c.sweep_grid = {{"theta1a", 0.4, 0.4, 2}, {"theta2a", 1.1, 1.1, 2}};
  const Heatmap h = entropy_sweep(c);
  REQUIRE(h.values.size() == 4);
  for (double v : h.values) CHECK(v == h.values[0]);
}

TEST_CASE("sweep scalar") {
  const std::vector<double> s{0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  CHECK(sweep_scalar(s, SweepScalar::final_step) == 8.0);
  // Last quarter of 8 steps: t = 6, 7, 8.
  CHECK(sweep_scalar(s, SweepScalar::long_time_mean) == doctest::Approx(7.0));
  CHECK(sweep_scalar({0.5}, SweepScalar::long_time_mean) == 0.5);
}

TEST_CASE("run surfaces configuration and numerical errors") {
  RunConfig bad;
  bad.steps = -3;
  CHECK_THROWS_AS(run(bad), ConfigError);

  RunConfig tight;
  tight.steps = 30;
  tight.window = 5;
  CHECK_THROWS_AS(run(tight), BoundaryError);

  RunConfig sweep;
  sweep.run_kind = RunKind::entropy_sweep;
  sweep.sweep_grid = {{"theta1a", 0, 1, 2}};
  CHECK_THROWS_AS(run(sweep), ConfigError);
}

TEST_CASE("unwritable output directory") {
  RunConfig c;
  c.steps = 2;
  CHECK_THROWS_AS(write_artifacts(run(c), c, "/proc/qwalk_cannot_write"), std::runtime_error);
}
