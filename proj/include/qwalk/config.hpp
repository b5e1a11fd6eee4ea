#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwalk/lattice.hpp"
#include "qwalk/pair.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class RunKind { hadamard, single_split, tptpw, tptbw, entropy_sweep, phase_diagram };

// Scalar a sweep cell reports: entropy at the last step, or its mean over the
// last quarter of the run.
enum class SweepScalar { final_step, long_time_mean };

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

struct RunConfig {
  RunKind run_kind = RunKind::hadamard;
  int steps = 100;
  std::optional<int> window;  // half width; empty means steps + 1

  // Uniform-phase angles (single_split uses particle A's).
  AnglePair angles_a = kWindingOneAngles;
  AnglePair angles_b = kWindingZeroAngles;
  // Boundary walk: winding 1 on the left, winding 0 on the right, on both particles.
  BoundarySpec boundary_a{kWindingOneAngles, kWindingZeroAngles};
  BoundarySpec boundary_b{kWindingOneAngles, kWindingZeroAngles};

  InitialPairState pair_state{};
  std::array<Complex, 2> coin{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  int position = 0;

  // The seed field is ignored; replicate seeds come from master_seed.
  DisorderSpec disorder{};
  int ensemble_size = 1;
  std::uint64_t master_seed = 0;

  // Walk run in every cell of an entropy sweep (tptpw or tptbw).
  RunKind sweep_walk = RunKind::tptpw;
  std::vector<SweepAxis> sweep_grid;
  SweepScalar sweep_scalar = SweepScalar::final_step;

  int phase_grid = 64;
  int k_points = kDefaultKPoints;

  // Subset of {entropy, distribution, joint, phase, heatmap, manifest}; empty = all.
  std::vector<std::string> outputs;

  int resolved_half_width() const { return window ? *window : steps + 1; }
};

std::string_view to_string(RunKind kind);
std::string_view to_string(SweepScalar scalar);
std::string_view to_string(PairStateKind kind);
std::string_view to_string(DisorderTarget target);

bool is_pair_walk(RunKind kind);

// Parameter names a sweep axis may reference for the given cell walk.
std::vector<std::string> sweep_parameters(RunKind sweep_walk);

// Sets a named sweep parameter on a config. Throws ConfigError for unknown names.
void set_parameter(RunConfig& config, std::string_view name, double value);

// Throws ConfigError naming the first invalid field.
void validate(const RunConfig& config);

// Fields absent from the JSON keep their defaults. Accepts a manifest as well
// (its "config" member is used), so a manifest can be fed back to re-run.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

RunConfig load_config(const std::string& path);

// Command-line override helpers.

// Radians, numeric or as a multiple of pi: "-pi/2", "3*pi/4", "0.1pi".
double parse_angle(std::string_view text, std::string_view field);
RunKind parse_run_kind(std::string_view text, std::string_view field = "run_kind");
PairStateKind parse_pair_state(std::string_view text, std::string_view field = "initial_state");
DisorderTarget parse_disorder_target(std::string_view text,
                                     std::string_view field = "disorder.target");
// none | weak | strong | width=<radians>; the target is left unchanged.
DisorderSpec parse_disorder(std::string_view text, DisorderSpec base = {});
// "t1-,t2-,t1+,t2+"
BoundarySpec parse_boundary(std::string_view text);
// "name:min:max:count"
SweepAxis parse_sweep_axis(std::string_view text);
SweepScalar parse_sweep_scalar(std::string_view text);
// "re0,im0,re1,im1"
std::array<Complex, 2> parse_coin(std::string_view text);

}  // namespace qwalk
