#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/config.hpp"
#include "qwalk/pair.hpp"
#include "qwalk/topology.hpp"

namespace qwalk {

struct EntropyTable {
  std::vector<int> steps;
  std::vector<double> mean_bits;
  std::vector<double> std_bits;  // filled only for ensembles (size > 1)
};

struct PositionDistribution {
  LatticeWindow window{1};
  std::vector<double> probability;  // indexed by window site
};

// Row-major values, axis1 the slow index.
struct Heatmap {
  SweepAxis axis1;
  SweepAxis axis2;
  std::vector<double> values;
};

struct RunArtifacts {
  std::optional<EntropyTable> entropy;
  std::optional<PositionDistribution> distribution;
  std::optional<JointDistribution> joint;
  std::optional<std::vector<PhaseCell>> phase;
  std::optional<Heatmap> heatmap;
  nlohmann::json manifest;
};

struct RunOptions {
  unsigned threads = 0;  // 0 = hardware concurrency; results do not depend on it
};

// Seed of ensemble replicate r. Sweep cells first derive a cell seed from the
// master seed and the cell index, then replicate seeds from that.
std::uint64_t replicate_seed(std::uint64_t parent_seed, int replicate);

// Validates and executes a configuration. Throws ConfigError for invalid
// fields and NumericalError when a run leaves its numerical contract.
RunArtifacts run(const RunConfig& config, const RunOptions& options = {});

// Sweeps the cell walk over exactly two axes; one scalar per cell.
Heatmap entropy_sweep(const RunConfig& config, const RunOptions& options = {});

// Scalar reported by a sweep cell for one entropy series.
double sweep_scalar(const std::vector<double>& entropy_bits, SweepScalar scalar);

// Writes the selected artifacts into out_dir (created if missing) and returns
// the paths written. Data files depend only on the configuration; timestamps
// live in manifest.json alone.
std::vector<std::filesystem::path> write_artifacts(const RunArtifacts& artifacts,
                                                   const RunConfig& config,
                                                   const std::filesystem::path& out_dir);

// "%.16e": 17 significant digits.
std::string format_double(double value);

}  // namespace qwalk
