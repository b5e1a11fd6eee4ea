#include "qwalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(std::string(field), "not a number: '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(std::string(field), "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

double angle_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>(), field);
  throw ConfigError(field, "expected a number or an angle string");
}

AnglePair angles_from_json(const json& j, const std::string& field, AnglePair base) {
  if (j.is_array()) {
    if (j.size() != 2) throw ConfigError(field, "expected [theta1, theta2]");
    return {angle_from_json(j[0], field + "[0]"), angle_from_json(j[1], field + "[1]")};
  }
  if (!j.is_object()) throw ConfigError(field, "expected an object or [theta1, theta2]");
  if (j.contains("theta1")) base.theta1 = angle_from_json(j["theta1"], field + ".theta1");
  if (j.contains("theta2")) base.theta2 = angle_from_json(j["theta2"], field + ".theta2");
  return base;
}

BoundarySpec boundary_from_json(const json& j, const std::string& field, BoundarySpec base) {
  if (!j.is_object()) throw ConfigError(field, "expected an object with minus/plus");
  if (j.contains("minus")) base.minus = angles_from_json(j["minus"], field + ".minus", base.minus);
  if (j.contains("plus")) base.plus = angles_from_json(j["plus"], field + ".plus", base.plus);
  if (j.contains("origin")) {
    const json& o = j["origin"];
    if (o == "minus") {
      base.origin = OriginSide::minus;
    } else if (o == "plus") {
      base.origin = OriginSide::plus;
    } else {
      throw ConfigError(field + ".origin", "expected \"minus\" or \"plus\"");
    }
  }
  return base;
}

template <typename T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

json angles_to_json(const AnglePair& a) { return {{"theta1", a.theta1}, {"theta2", a.theta2}}; }

json boundary_to_json(const BoundarySpec& b) {
  return {{"minus", angles_to_json(b.minus)},
          {"plus", angles_to_json(b.plus)},
          {"origin", b.origin == OriginSide::minus ? "minus" : "plus"}};
}

Complex complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(field, "expected a number or [re, im]");
}

const std::vector<std::string> kOutputNames = {"entropy", "distribution", "joint",
                                               "phase",   "heatmap",      "manifest"};

}  // namespace

double parse_angle(std::string_view text, std::string_view field) {
  std::string t = trim(text);
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_number(t, field);
  std::string coef = t.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double factor = 1.0;
  if (coef == "-") {
    factor = -1.0;
  } else if (!coef.empty() && coef != "+") {
    factor = parse_number(coef, field);
  }
  const std::string rest = t.substr(pos + 2);
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') {
      throw ConfigError(std::string(field), "cannot parse angle '" + std::string(text) + "'");
    }
    denom = parse_number(rest.substr(1), field);
  }
  const double value = factor * std::numbers::pi / denom;
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(field), "angle '" + std::string(text) + "' is not finite");
  }
  return value;
}

std::string_view to_string(RunKind kind) {
  switch (kind) {
    case RunKind::hadamard: return "hadamard";
    case RunKind::single_split: return "single_split";
    case RunKind::tptpw: return "tptpw";
    case RunKind::tptbw: return "tptbw";
    case RunKind::entropy_sweep: return "entropy_sweep";
    case RunKind::phase_diagram: return "phase_diagram";
  }
  return "?";
}

std::string_view to_string(SweepScalar scalar) {
  return scalar == SweepScalar::final_step ? "final" : "mean";
}

std::string_view to_string(PairStateKind kind) {
  switch (kind) {
    case PairStateKind::psi_plus: return "psi+";
    case PairStateKind::psi_minus: return "psi-";
    case PairStateKind::separable: return "sep";
  }
  return "?";
}

std::string_view to_string(DisorderTarget target) {
  switch (target) {
    case DisorderTarget::a: return "a";
    case DisorderTarget::b: return "b";
    case DisorderTarget::both: return "both";
  }
  return "?";
}

bool is_pair_walk(RunKind kind) { return kind == RunKind::tptpw || kind == RunKind::tptbw; }

RunKind parse_run_kind(std::string_view text, std::string_view field) {
  for (RunKind k : {RunKind::hadamard, RunKind::single_split, RunKind::tptpw, RunKind::tptbw,
                    RunKind::entropy_sweep, RunKind::phase_diagram}) {
    if (text == to_string(k)) return k;
  }
  if (text == "split") return RunKind::single_split;
  if (text == "sweep") return RunKind::entropy_sweep;
  throw ConfigError(std::string(field), "unknown run kind '" + std::string(text) + "'");
}

PairStateKind parse_pair_state(std::string_view text, std::string_view field) {
  if (text == "psi+" || text == "psi_plus") return PairStateKind::psi_plus;
  if (text == "psi-" || text == "psi_minus") return PairStateKind::psi_minus;
  if (text == "sep" || text == "separable") return PairStateKind::separable;
  throw ConfigError(std::string(field), "unknown initial state '" + std::string(text) + "'");
}

DisorderTarget parse_disorder_target(std::string_view text, std::string_view field) {
  if (text == "a") return DisorderTarget::a;
  if (text == "b") return DisorderTarget::b;
  if (text == "both") return DisorderTarget::both;
  throw ConfigError(std::string(field), "unknown disorder target '" + std::string(text) + "'");
}

DisorderSpec parse_disorder(std::string_view text, DisorderSpec base) {
  const std::string t = trim(text);
  if (t == "none") {
    base.kind = DisorderKind::none;
    base.half_width = 0.0;
  } else if (t == "weak") {
    base.kind = DisorderKind::uniform;
    base.half_width = kWeakDisorderHalfWidth;
  } else if (t == "strong") {
    base.kind = DisorderKind::uniform;
    base.half_width = kStrongDisorderHalfWidth;
  } else if (t.rfind("width=", 0) == 0) {
    base.kind = DisorderKind::uniform;
    base.half_width = parse_angle(t.substr(6), "disorder");
  } else {
    throw ConfigError("disorder", "expected none|weak|strong|width=<radians>, got '" + t + "'");
  }
  return base;
}

BoundarySpec parse_boundary(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("boundary", "expected four angles t1-,t2-,t1+,t2+");
  return {{parse_angle(parts[0], "boundary"), parse_angle(parts[1], "boundary")},
          {parse_angle(parts[2], "boundary"), parse_angle(parts[3], "boundary")}};
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw ConfigError("sweep_grid", "expected name:min:max:count");
  return {parts[0], parse_angle(parts[1], "sweep_grid"), parse_angle(parts[2], "sweep_grid"),
          parse_int(parts[3], "sweep_grid")};
}

SweepScalar parse_sweep_scalar(std::string_view text) {
  if (text == "final") return SweepScalar::final_step;
  if (text == "mean") return SweepScalar::long_time_mean;
  throw ConfigError("sweep_scalar", "expected final|mean, got '" + std::string(text) + "'");
}

std::array<Complex, 2> parse_coin(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("initial_state.coin", "expected re0,im0,re1,im1");
  return {Complex{parse_number(parts[0], "initial_state.coin"),
                  parse_number(parts[1], "initial_state.coin")},
          Complex{parse_number(parts[2], "initial_state.coin"),
                  parse_number(parts[3], "initial_state.coin")}};
}

std::vector<std::string> sweep_parameters(RunKind sweep_walk) {
  std::vector<std::string> names = {"theta1a", "theta2a", "theta1b", "theta2b", "disorder_width"};
  if (sweep_walk == RunKind::tptbw) {
    for (const char* p : {"a", "b"}) {
      for (const char* t : {"theta1", "theta2"}) {
        for (const char* side : {"_minus", "_plus"}) names.push_back(std::string(t) + p + side);
      }
    }
  }
  return names;
}

void set_parameter(RunConfig& config, std::string_view name, double value) {
  const bool boundary = config.sweep_walk == RunKind::tptbw;
  const auto set_pair = [&](AnglePair& uniform, BoundarySpec& split, bool first) {
    auto& u = first ? uniform.theta1 : uniform.theta2;
    u = value;
    (first ? split.minus.theta1 : split.minus.theta2) = value;
    (first ? split.plus.theta1 : split.plus.theta2) = value;
  };
  if (name == "theta1a") return set_pair(config.angles_a, config.boundary_a, true);
  if (name == "theta2a") return set_pair(config.angles_a, config.boundary_a, false);
  if (name == "theta1b") return set_pair(config.angles_b, config.boundary_b, true);
  if (name == "theta2b") return set_pair(config.angles_b, config.boundary_b, false);
  if (name == "disorder_width") {
    config.disorder.half_width = value;
    return;
  }
  if (boundary && name.size() > 7) {
    const std::string n(name);
    for (const char* p : {"a", "b"}) {
      BoundarySpec& spec = std::string(p) == "a" ? config.boundary_a : config.boundary_b;
      for (const char* side : {"_minus", "_plus"}) {
        AnglePair& pair = std::string(side) == "_minus" ? spec.minus : spec.plus;
        if (n == std::string("theta1") + p + side) {
          pair.theta1 = value;
          return;
        }
        if (n == std::string("theta2") + p + side) {
          pair.theta2 = value;
          return;
        }
      }
    }
  }
  throw ConfigError("sweep_grid", "unknown parameter '" + std::string(name) + "' for " +
                                      std::string(to_string(config.sweep_walk)) + " sweeps");
}

void validate(const RunConfig& c) {
  if (c.steps < 0) throw ConfigError("steps", "must be >= 0");
  if (c.window && *c.window < 1) throw ConfigError("window", "half width must be >= 1");
  if (c.ensemble_size < 1) throw ConfigError("ensemble_size", "must be >= 1");
  if (!(c.disorder.half_width >= 0.0) || !std::isfinite(c.disorder.half_width)) {
    throw ConfigError("disorder.half_width", "must be finite and >= 0");
  }
  for (double a : {c.angles_a.theta1, c.angles_a.theta2, c.angles_b.theta1, c.angles_b.theta2,
                   c.boundary_a.minus.theta1, c.boundary_a.minus.theta2,
                   c.boundary_a.plus.theta1, c.boundary_a.plus.theta2,
                   c.boundary_b.minus.theta1, c.boundary_b.minus.theta2,
                   c.boundary_b.plus.theta1, c.boundary_b.plus.theta2}) {
    if (!std::isfinite(a)) throw ConfigError("angles", "angles must be finite");
  }
  const int half = c.resolved_half_width();
  if (c.run_kind == RunKind::hadamard && c.disorder.kind != DisorderKind::none) {
    throw ConfigError("disorder", "hadamard walks have no angles to disorder");
  }
  if (c.run_kind == RunKind::hadamard || c.run_kind == RunKind::single_split) {
    const double norm = std::norm(c.coin[0]) + std::norm(c.coin[1]);
    if (std::abs(norm - 1.0) > 1e-10) {
      throw ConfigError("initial_state.coin", "coin amplitudes are not normalized");
    }
    if (std::abs(c.position) >= half) {
      throw ConfigError("initial_state.position", "must lie strictly inside the window");
    }
  }
  if (is_pair_walk(c.run_kind) || c.run_kind == RunKind::entropy_sweep) {
    if (std::abs(c.pair_state.xa) >= half || std::abs(c.pair_state.xb) >= half) {
      throw ConfigError("initial_state.positions", "must lie strictly inside the window");
    }
  }
  if (c.run_kind == RunKind::entropy_sweep) {
    if (!is_pair_walk(c.sweep_walk)) throw ConfigError("sweep_walk", "must be tptpw or tptbw");
    if (c.sweep_grid.size() != 2) throw ConfigError("sweep_grid", "needs exactly two axes");
    const auto allowed = sweep_parameters(c.sweep_walk);
    for (const SweepAxis& axis : c.sweep_grid) {
      if (std::find(allowed.begin(), allowed.end(), axis.parameter) == allowed.end()) {
        throw ConfigError("sweep_grid", "unknown parameter '" + axis.parameter + "' for " +
                                            std::string(to_string(c.sweep_walk)) + " sweeps");
      }
      if (axis.count < 1) throw ConfigError("sweep_grid", "axis count must be >= 1");
      if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
        throw ConfigError("sweep_grid", "axis bounds must be finite");
      }
    }
    if (c.sweep_grid[0].parameter == c.sweep_grid[1].parameter) {
      throw ConfigError("sweep_grid", "axes must reference different parameters");
    }
  }
  if (c.run_kind == RunKind::phase_diagram) {
    if (c.phase_grid < 16) throw ConfigError("phase_grid", "must be >= 16");
    if (c.k_points < 64) throw ConfigError("k_points", "must be >= 64");
  }
  for (const std::string& out : c.outputs) {
    if (std::find(kOutputNames.begin(), kOutputNames.end(), out) == kOutputNames.end()) {
      throw ConfigError("outputs", "unknown artifact '" + out + "'");
    }
  }
}

RunConfig config_from_json(const json& input) {
  if (!input.is_object()) throw ConfigError("config", "expected a JSON object");
  const json& j = input.contains("config") && input["config"].is_object() ? input["config"] : input;
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "run_kind") {
      c.run_kind = parse_run_kind(get_as<std::string>(value, key));
    } else if (key == "steps") {
      c.steps = get_as<int>(value, key);
    } else if (key == "window") {
      if (value.is_string() && value.get<std::string>() == "auto") {
        c.window.reset();
      } else {
        c.window = get_as<int>(value, key);
      }
    } else if (key == "angles") {
      if (!value.is_object()) throw ConfigError(key, "expected {\"a\": ..., \"b\": ...}");
      if (value.contains("a")) c.angles_a = angles_from_json(value["a"], "angles.a", c.angles_a);
      if (value.contains("b")) c.angles_b = angles_from_json(value["b"], "angles.b", c.angles_b);
    } else if (key == "boundary") {
      if (!value.is_object()) throw ConfigError(key, "expected an object");
      if (value.contains("minus") || value.contains("plus") || value.contains("origin")) {
        c.boundary_a = boundary_from_json(value, "boundary", c.boundary_a);
        c.boundary_b = c.boundary_a;
      }
      if (value.contains("a")) c.boundary_a = boundary_from_json(value["a"], "boundary.a", c.boundary_a);
      if (value.contains("b")) c.boundary_b = boundary_from_json(value["b"], "boundary.b", c.boundary_b);
    } else if (key == "initial_state") {
      if (value.is_string()) {
        c.pair_state.kind = parse_pair_state(value.get<std::string>());
        continue;
      }
      if (!value.is_object()) throw ConfigError(key, "expected an object or a state name");
      if (value.contains("kind")) {
        c.pair_state.kind =
            parse_pair_state(get_as<std::string>(value["kind"], "initial_state.kind"),
                             "initial_state.kind");
      }
      if (value.contains("positions")) {
        const auto pos = get_as<std::array<int, 2>>(value["positions"], "initial_state.positions");
        c.pair_state.xa = pos[0];
        c.pair_state.xb = pos[1];
      }
      if (value.contains("coin")) {
        const json& coin = value["coin"];
        if (!coin.is_array() || coin.size() != 2) {
          throw ConfigError("initial_state.coin", "expected [amp0, amp1]");
        }
        c.coin = {complex_from_json(coin[0], "initial_state.coin[0]"),
                  complex_from_json(coin[1], "initial_state.coin[1]")};
      }
      if (value.contains("position")) {
        c.position = get_as<int>(value["position"], "initial_state.position");
      }
    } else if (key == "disorder") {
      if (value.is_string()) {
        c.disorder = parse_disorder(value.get<std::string>(), c.disorder);
        continue;
      }
      if (!value.is_object()) throw ConfigError(key, "expected an object or a preset name");
      if (value.contains("kind")) {
        const auto kind = get_as<std::string>(value["kind"], "disorder.kind");
        if (kind == "uniform") {
          c.disorder.kind = DisorderKind::uniform;
        } else {
          c.disorder = parse_disorder(kind, c.disorder);
        }
      }
      if (value.contains("half_width")) {
        c.disorder.half_width = angle_from_json(value["half_width"], "disorder.half_width");
      }
      if (value.contains("target")) {
        c.disorder.target =
            parse_disorder_target(get_as<std::string>(value["target"], "disorder.target"));
      }
    } else if (key == "ensemble_size") {
      c.ensemble_size = get_as<int>(value, key);
    } else if (key == "master_seed") {
      c.master_seed = get_as<std::uint64_t>(value, key);
    } else if (key == "sweep_walk") {
      c.sweep_walk = parse_run_kind(get_as<std::string>(value, key), key);
    } else if (key == "sweep_grid") {
      if (!value.is_array()) throw ConfigError(key, "expected a list of axes");
      c.sweep_grid.clear();
      for (const json& axis : value) {
        if (axis.is_string()) {
          c.sweep_grid.push_back(parse_sweep_axis(axis.get<std::string>()));
          continue;
        }
        if (!axis.is_object() || !axis.contains("parameter")) {
          throw ConfigError(key, "axis needs parameter, min, max, count");
        }
        SweepAxis a;
        a.parameter = get_as<std::string>(axis["parameter"], "sweep_grid.parameter");
        a.min = angle_from_json(axis.value("min", json(0.0)), "sweep_grid.min");
        a.max = angle_from_json(axis.value("max", json(0.0)), "sweep_grid.max");
        a.count = get_as<int>(axis.value("count", json(1)), "sweep_grid.count");
        c.sweep_grid.push_back(std::move(a));
      }
    } else if (key == "sweep_scalar") {
      c.sweep_scalar = parse_sweep_scalar(get_as<std::string>(value, key));
    } else if (key == "phase_grid") {
      c.phase_grid = get_as<int>(value, key);
    } else if (key == "k_points") {
      c.k_points = get_as<int>(value, key);
    } else if (key == "outputs") {
      c.outputs = get_as<std::vector<std::string>>(value, key);
    } else if (key == "description" || key == "figure") {
      // free-form annotations
    } else {
      throw ConfigError(key, "unknown configuration field");
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["run_kind"] = to_string(c.run_kind);
  j["steps"] = c.steps;
  j["window"] = c.window ? json(*c.window) : json("auto");
  j["angles"] = {{"a", angles_to_json(c.angles_a)}, {"b", angles_to_json(c.angles_b)}};
  j["boundary"] = {{"a", boundary_to_json(c.boundary_a)}, {"b", boundary_to_json(c.boundary_b)}};
  j["initial_state"] = {
      {"kind", to_string(c.pair_state.kind)},
      {"positions", {c.pair_state.xa, c.pair_state.xb}},
      {"coin", {{c.coin[0].real(), c.coin[0].imag()}, {c.coin[1].real(), c.coin[1].imag()}}},
      {"position", c.position}};
  j["disorder"] = {
      {"kind", c.disorder.kind == DisorderKind::none ? "none" : "uniform"},
      {"half_width", c.disorder.half_width},
      {"target", to_string(c.disorder.target)}};
  j["ensemble_size"] = c.ensemble_size;
  j["master_seed"] = c.master_seed;
  j["sweep_walk"] = to_string(c.sweep_walk);
  j["sweep_grid"] = json::array();
  for (const SweepAxis& a : c.sweep_grid) {
    j["sweep_grid"].push_back(
        {{"parameter", a.parameter}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  }
  j["sweep_scalar"] = to_string(c.sweep_scalar);
  j["phase_grid"] = c.phase_grid;
  j["k_points"] = c.k_points;
  j["outputs"] = c.outputs;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config", "invalid JSON in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace qwalk
