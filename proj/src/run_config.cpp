// Copyright 2026 The qrb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrb/run_config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace qrb {

namespace {

using json = nlohmann::json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Source {
 public:
  Source(std::string_view text, std::string_view name) : text_(text), name_(name) {}

  [[noreturn]] void fail(std::string_view path, std::string_view message) const {
    const int line = line_of(path);
    if (line > 0) throw ConfigError(fmt::format("{}:{}: '{}': {}", name_, line, path, message));
    throw ConfigError(fmt::format("{}: '{}': {}", name_, path, message));
  }

  [[noreturn]] void fail_at_byte(std::size_t byte, std::string_view message) const {
    throw ConfigError(fmt::format("{}:{}: {}", name_, line_at(byte), message));
  }

 private:
  // Finds each path segment as a quoted key after the previous one.
  int line_of(std::string_view path) const {
    std::size_t pos = 0;
    std::size_t start = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string_view seg = path.substr(start, dot == std::string_view::npos ? path.size() - start : dot - start);
      const std::size_t hit = text_.find(fmt::format("\"{}\"", seg), pos);
      if (hit == std::string_view::npos) return 0;
      pos = hit + 1;
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    return line_at(pos);
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  }

  std::string_view text_;
  std::string name_;
};

class Section {
 public:
  Section(const json& j, std::string path, const Source& src, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)), src_(src) {
    if (!j_.is_object()) src_.fail(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& item : j_.items()) {
      if (!allowed.count(item.key())) src_.fail(key_path(item.key()), "unknown key");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, std::string_view message) const { src_.fail(key_path(key), message); }

  bool number(const std::string& key, double& out, double lo = -kInf, double hi = kInf) const {
    if (!has(key)) return false;
    out = to_number(j_.at(key), key);
    if (!(out >= lo && out <= hi)) fail(key, fmt::format("value {} outside [{}, {}]", out, lo, hi));
    return true;
  }

  /// null maps to `if_null`.
  bool nullable_number(const std::string& key, double& out, double if_null, double lo = -kInf) const {
    if (!has(key)) return false;
    if (j_.at(key).is_null()) {
      out = if_null;
      return true;
    }
    return number(key, out, lo);
  }

  template <typename Int>
  bool integer(const std::string& key, Int& out, std::int64_t lo) const {
    if (!has(key)) return false;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto value = v.get<std::int64_t>();
    if (value < lo) fail(key, fmt::format("value {} below minimum {}", value, lo));
    out = static_cast<Int>(value);
    return true;
  }

  bool unsigned64(const std::string& key, std::uint64_t& out) const {
    if (!has(key)) return false;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
    return true;
  }

  bool string(const std::string& key, std::string& out) const {
    if (!has(key)) return false;
    if (!j_.at(key).is_string()) fail(key, "expected a string");
    out = j_.at(key).get<std::string>();
    return true;
  }

  /// Array of numbers or {"start", "stop", "count"}.
  bool grid(const std::string& key, std::vector<double>& out, double scale = 1.0) const {
    if (!has(key)) return false;
    const json& v = j_.at(key);
    std::vector<double> values;
    if (v.is_array()) {
      for (const json& x : v) values.push_back(to_number(x, key));
    } else if (v.is_object()) {
      Section range(v, key_path(key), src_, {"start", "stop", "count"});
      double start = 0.0, stop = 0.0;
      std::size_t count = 0;
      if (!range.number("start", start) || !range.number("stop", stop) || !range.integer("count", count, 1)) {
        fail(key, "range needs start, stop and count");
      }
      values = linear_grid(start, stop, count);
    } else {
      fail(key, "expected an array or a {start, stop, count} range");
    }
    if (values.empty()) fail(key, "empty grid");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] > values[i - 1])) fail(key, "grid must be strictly increasing");
    }
    out.clear();
    for (double x : values) out.push_back(x * scale);
    return true;
  }

  bool int_list(const std::string& key, std::vector<int>& out) const {
    if (!has(key)) return false;
    const json& v = j_.at(key);
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
    out.clear();
    for (const json& x : v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < 1 || x.get<std::int64_t>() > (1 << 20) - 1) {
        fail(key, "entries must be integers in [1, 1048575]");
      }
      out.push_back(x.get<int>());
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (out[i] <= out[i - 1]) fail(key, "must be strictly increasing");
    }
    return true;
  }

  /// Angular quantity given either in Hz or in rad/s, not both.
  bool angular(const std::string& stem, double& out, double lo = -kInf) const {
    const bool hz = has(stem + "_hz");
    const bool rad = has(stem + "_rad_s");
    if (hz && rad) fail(stem + "_hz", fmt::format("give {}_hz or {}_rad_s, not both", stem, stem));
    if (hz) {
      number(stem + "_hz", out, lo);
      out *= kTwoPi;
    }
    if (rad) number(stem + "_rad_s", out, lo);
    return hz || rad;
  }

  bool angular_grid(const std::string& stem, std::vector<double>& out) const {
    const bool hz = has(stem + "_hz");
    const bool rad = has(stem + "_rad_s");
    if (hz && rad) fail(stem + "_hz", fmt::format("give {}_hz or {}_rad_s, not both", stem, stem));
    if (hz) grid(stem + "_hz", out, kTwoPi);
    if (rad) grid(stem + "_rad_s", out);
    return hz || rad;
  }

  Section child(const std::string& key, std::set<std::string> allowed) const {
    return Section(j_.at(key), key_path(key), src_, std::move(allowed));
  }

 private:
  double to_number(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
    return x;
  }

  const json& j_;
  std::string path_;
  const Source& src_;
};

std::set<std::string> with_angular(std::set<std::string> keys, std::initializer_list<std::string> stems,
                                   std::string_view grid_suffix = "") {
  for (const auto& s : stems) {
    keys.insert(s + std::string(grid_suffix) + "_hz");
    keys.insert(s + std::string(grid_suffix) + "_rad_s");
  }
  return keys;
}

void read_timing(const Section& s, TimingConfig& t) {
  const bool half = s.number("t_half_pi_s", t.t_half_pi, 0.0);
  if (!s.number("t_pi_s", t.t_pi, 0.0) && half) t.t_pi = 2.0 * t.t_half_pi;
  s.number("hold_time_s", t.hold_time, 0.0);
  if (!s.number("prep_pulse_s", t.prep_pulse, 0.0) && half) t.prep_pulse = t.t_pi;
  if (!s.number("readout_pulse_s", t.readout_pulse, 0.0) && half) t.readout_pulse = t.t_pi;
}

void read_noise(const Section& s, NoiseConfig& n) {
  s.nullable_number("t2_s", n.t2, kInf, 0.0);
  s.number("t2_isotropic_fraction", n.t2_isotropic_fraction, 0.0, 1.0);
  double t2_star = 0.0;
  const bool star = s.nullable_number("t2_star_s", t2_star, kInf, 0.0);
  const bool sigma = s.angular("static_detuning_sigma", n.static_detuning_sigma, 0.0);
  if (star && sigma) s.fail("t2_star_s", "give t2_star_s or static_detuning_sigma, not both");
  if (star) {
    if (t2_star <= 0.0) s.fail("t2_star_s", "must be positive");
    n.static_detuning_sigma = 1.0 / t2_star;
  }
  s.number("amplitude_inhomogeneity_sigma", n.amplitude_inhomogeneity_sigma, 0.0);
  s.angular("systematic_detuning", n.systematic_detuning);
  s.number("duration_offset_s", n.duration_offset);
  s.number("amplitude_noise_sigma", n.amplitude_noise_sigma, 0.0);
  s.number("scattering_rate_per_s", n.depolarizing_rate, 0.0);
  std::string mode;
  if (s.string("scattering_mode", mode)) {
    if (mode == "channel") {
      n.scattering_mode = ScatteringMode::kChannel;
    } else if (mode == "trajectory") {
      n.scattering_mode = ScatteringMode::kTrajectory;
    } else {
      s.fail("scattering_mode", "expected \"channel\" or \"trajectory\"");
    }
  }
  s.number("gate_depolarization_prob", n.gate_depolarization, 0.0, 1.0);
  s.number("spam_flip_prob", n.spam_flip_prob, 0.0, 0.5);
  s.integer("pulse_substeps", n.pulse_substeps, 1);
}

RunConfig read_config(const json& root, const Source& src) {
  const Section top(root, "", src,
                    {"preset", "seed", "ensemble_size", "workers", "shots", "frame_mode", "timing", "noise",
                     "sequences", "sweeps", "ramsey", "echo"});
  std::string base = "noiseless";
  top.string("preset", base);
  RunConfig cfg;
  try {
    cfg = preset(base);
  } catch (const ConfigError& e) {
    top.fail("preset", e.what());
  }
  ExperimentConfig& e = cfg.experiment;
  top.unsigned64("seed", e.master_seed);
  top.integer("ensemble_size", e.ensemble_size, 1);
  top.integer("workers", e.workers, 0);
  top.integer("shots", e.shots, 0);
  std::string frame;
  if (top.string("frame_mode", frame)) {
    if (frame == "virtual") {
      e.frame_mode = FrameMode::kVirtual;
    } else if (frame == "physical") {
      e.frame_mode = FrameMode::kPhysical;
    } else {
      top.fail("frame_mode", "expected \"virtual\" or \"physical\"");
    }
  }
  if (top.has("timing")) {
    read_timing(top.child("timing", {"t_half_pi_s", "t_pi_s", "hold_time_s", "prep_pulse_s", "readout_pulse_s"}),
                e.timing);
  }
  if (top.has("noise")) {
    read_noise(top.child("noise", with_angular({"t2_s", "t2_isotropic_fraction", "t2_star_s",
                                                "amplitude_inhomogeneity_sigma", "duration_offset_s",
                                                "amplitude_noise_sigma", "scattering_rate_per_s", "scattering_mode",
                                                "gate_depolarization_prob", "spam_flip_prob", "pulse_substeps"},
                                               {"static_detuning_sigma", "systematic_detuning"})),
               e.noise);
  }
  if (top.has("sequences")) {
    const Section s = top.child("sequences", {"n_cg", "n_pr", "truncations"});
    s.integer("n_cg", e.plan.n_cg, 1);
    s.integer("n_pr", e.plan.n_pr, 1);
    s.int_list("truncations", e.plan.truncations);
  }
  if (top.has("sweeps")) {
    const Section s = top.child(
        "sweeps", with_angular({"n_cg", "n_pr", "truncation", "duration_grid_s", "hold_time_grid_s"}, {"detuning_grid"}));
    s.integer("n_cg", e.sweep.n_cg, 1);
    s.integer("n_pr", e.sweep.n_pr, 1);
    s.integer("truncation", e.sweep.truncation, 1);
    s.angular_grid("detuning_grid", cfg.scans.detuning_grid);
    s.grid("duration_grid_s", cfg.scans.duration_grid);
    s.grid("hold_time_grid_s", cfg.scans.hold_time_grid);
    if (!cfg.scans.hold_time_grid.empty() && cfg.scans.hold_time_grid.front() < 0.0) {
      s.fail("hold_time_grid_s", "hold times must be >= 0");
    }
  }
  if (top.has("ramsey")) {
    const Section s = top.child("ramsey", with_angular({"delays_s"}, {"detuning"}));
    s.angular("detuning", cfg.scans.ramsey_detuning);
    s.grid("delays_s", cfg.scans.ramsey_delays);
  }
  if (top.has("echo")) {
    const Section s = top.child("echo", with_angular({"times_s", "offsets_s"}, {"detuning"}));
    s.angular("detuning", cfg.scans.echo_detuning);
    s.grid("times_s", cfg.scans.echo_times);
    s.grid("offsets_s", cfg.scans.echo_offsets);
  }
  try {
    e.validate();
  } catch (const std::invalid_argument& ex) {
    src.fail("<root>", ex.what());
  }
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() { return {"noiseless", "paper_defaults"}; }

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  if (name == "noiseless") return cfg;
  if (name == "paper_defaults") {
    NoiseConfig& n = cfg.experiment.noise;
    n.t2 = 0.28;
    n.static_detuning_sigma = 1.0 / 25e-3;
    n.depolarizing_rate = 0.2;
    n.spam_flip_prob = 0.009;
    return cfg;
  }
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  const Source src(text, source);
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    src.fail_at_byte(e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
  if (root.is_object() && root.contains("qrb_sidecar")) {
    if (!root.contains("config")) src.fail("qrb_sidecar", "sidecar has no config member");
    return read_config(root.at("config"), src);
  }
  return read_config(root, src);
}

RunConfig load_run_config(const std::string& path_or_preset) {
  std::ifstream in(path_or_preset);
  if (!in) {
    for (const auto& name : preset_names()) {
      if (name == path_or_preset) return preset(name);
    }
    throw ConfigError(fmt::format("{}: cannot open file (presets: noiseless, paper_defaults)", path_or_preset));
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path_or_preset);
}

nlohmann::ordered_json to_json(const RunConfig& config) {
  using oj = nlohmann::ordered_json;
  const ExperimentConfig& e = config.experiment;
  const NoiseConfig& n = e.noise;
  const auto nullable = [](double v) { return std::isinf(v) ? oj(nullptr) : oj(v); };
  oj j;
  j["seed"] = e.master_seed;
  j["ensemble_size"] = e.ensemble_size;
  j["workers"] = e.workers;
  j["shots"] = e.shots;
  j["frame_mode"] = e.frame_mode == FrameMode::kVirtual ? "virtual" : "physical";
  j["timing"] = {{"t_half_pi_s", e.timing.t_half_pi},
                 {"t_pi_s", e.timing.t_pi},
                 {"hold_time_s", e.timing.hold_time},
                 {"prep_pulse_s", e.timing.prep_pulse},
                 {"readout_pulse_s", e.timing.readout_pulse}};
  j["noise"] = {{"t2_s", nullable(n.t2)},
                {"t2_isotropic_fraction", n.t2_isotropic_fraction},
                {"static_detuning_sigma_rad_s", n.static_detuning_sigma},
                {"amplitude_inhomogeneity_sigma", n.amplitude_inhomogeneity_sigma},
                {"systematic_detuning_rad_s", n.systematic_detuning},
                {"duration_offset_s", n.duration_offset},
                {"amplitude_noise_sigma", n.amplitude_noise_sigma},
                {"scattering_rate_per_s", n.depolarizing_rate},
                {"scattering_mode", n.scattering_mode == ScatteringMode::kChannel ? "channel" : "trajectory"},
                {"gate_depolarization_prob", n.gate_depolarization},
                {"spam_flip_prob", n.spam_flip_prob},
                {"pulse_substeps", n.pulse_substeps}};
  j["sequences"] = {{"n_cg", e.plan.n_cg}, {"n_pr", e.plan.n_pr}, {"truncations", e.plan.truncations}};
  j["sweeps"] = {{"n_cg", e.sweep.n_cg},
                 {"n_pr", e.sweep.n_pr},
                 {"truncation", e.sweep.truncation},
                 {"detuning_grid_rad_s", config.scans.detuning_grid},
                 {"duration_grid_s", config.scans.duration_grid},
                 {"hold_time_grid_s", config.scans.hold_time_grid}};
  j["ramsey"] = {{"detuning_rad_s", config.scans.ramsey_detuning}, {"delays_s", config.scans.ramsey_delays}};
  j["echo"] = {{"detuning_rad_s", config.scans.echo_detuning},
               {"times_s", config.scans.echo_times},
               {"offsets_s", config.scans.echo_offsets}};
  return j;
}

std::string_view code_version() { return QRB_VERSION; }

std::string config_fingerprint(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(config).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace qrb
