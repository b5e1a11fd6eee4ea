#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "qwalk/experiment.hpp"

namespace qwalk {

namespace fs = std::filesystem;

namespace {

bool wanted(const RunConfig& config, const std::string& name) {
  return config.outputs.empty() ||
         std::find(config.outputs.begin(), config.outputs.end(), name) != config.outputs.end();
}

class CsvFile {
 public:
  explicit CsvFile(fs::path path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw std::runtime_error("cannot open " + path_.string() + " for writing");
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << '\n';
  }

  fs::path close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
    return path_;
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::vector<fs::path> write_artifacts(const RunArtifacts& a, const RunConfig& config,
                                      const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  if (a.entropy && wanted(config, "entropy")) {
    CsvFile f(out_dir / "entropy.csv");
    const bool with_std = !a.entropy->std_bits.empty();
    if (with_std) {
      f.row("step", "entropy_bits", "std");
    } else {
      f.row("step", "entropy_bits");
    }
    for (std::size_t t = 0; t < a.entropy->steps.size(); ++t) {
      if (with_std) {
        f.row(a.entropy->steps[t], format_double(a.entropy->mean_bits[t]),
              format_double(a.entropy->std_bits[t]));
      } else {
        f.row(a.entropy->steps[t], format_double(a.entropy->mean_bits[t]));
      }
    }
    written.push_back(f.close());
  }
  if (a.distribution && wanted(config, "distribution")) {
    CsvFile f(out_dir / "distribution.csv");
    f.row("x", "probability");
    const LatticeWindow& w = a.distribution->window;
    for (std::size_t s = 0; s < a.distribution->probability.size(); ++s) {
      f.row(w.position(s), format_double(a.distribution->probability[s]));
    }
    written.push_back(f.close());
  }
  if (a.joint && wanted(config, "joint")) {
    CsvFile f(out_dir / "joint.csv");
    f.row("i", "j", "probability");
    const LatticeWindow& w = a.joint->window();
    for (std::size_t i = 0; i < a.joint->sites(); ++i) {
      for (std::size_t j = 0; j < a.joint->sites(); ++j) {
        f.row(w.position(i), w.position(j), format_double(a.joint->at(i, j)));
      }
    }
    written.push_back(f.close());
  }
  if (a.phase && wanted(config, "phase")) {
    CsvFile f(out_dir / "phase.csv");
    f.row("theta1", "theta2", "winding", "gap");
    for (const PhaseCell& cell : *a.phase) {
      f.row(format_double(cell.theta1), format_double(cell.theta2),
            cell.winding ? *cell.winding : -1, format_double(cell.gap));
    }
    written.push_back(f.close());
  }
  if (a.heatmap && wanted(config, "heatmap")) {
    CsvFile f(out_dir / "heatmap.csv");
    f.row("axis1", "axis2", "scalar");
    const Heatmap& h = *a.heatmap;
    for (int i = 0; i < h.axis1.count; ++i) {
      for (int j = 0; j < h.axis2.count; ++j) {
        f.row(format_double(grid_value(h.axis1.min, h.axis1.max, i, h.axis1.count)),
              format_double(grid_value(h.axis2.min, h.axis2.max, j, h.axis2.count)),
              format_double(h.values[static_cast<std::size_t>(i * h.axis2.count + j)]));
      }
    }
    written.push_back(f.close());
  }
  if (wanted(config, "manifest")) {
    nlohmann::json manifest = a.manifest;
    manifest["files"] = nlohmann::json::array();
    for (const fs::path& p : written) manifest["files"].push_back(p.filename().string());
    const fs::path path = out_dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << manifest.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace qwalk
