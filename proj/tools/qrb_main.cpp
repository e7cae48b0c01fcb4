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

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "qrb/analysis.hpp"
#include "qrb/bootstrap.hpp"
#include "qrb/dataset_io.hpp"
#include "qrb/experiments.hpp"
#include "qrb/reproduction.hpp"
#include "qrb/run_config.hpp"

namespace {

using namespace qrb;

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitFit = 3;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommonOptions {
  std::string config = "noiseless";
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> ensemble;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON run configuration, sidecar, or preset (noiseless, paper_defaults)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--ensemble", o.ensemble, "atoms per job")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

RunConfig load(const CommonOptions& o) {
  RunConfig cfg = load_run_config(o.config);
  if (o.seed) cfg.experiment.master_seed = *o.seed;
  if (o.ensemble) cfg.experiment.ensemble_size = *o.ensemble;
  if (o.workers) cfg.experiment.workers = *o.workers;
  cfg.experiment.validate();
  return cfg;
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { std::filesystem::create_directories(dir_); }

  template <typename Writer>
  void csv(const std::string& name, Writer&& writer) {
    std::ostringstream s;
    writer(s);
    text(name, s.str());
  }

  void json(const std::string& name, const nlohmann::ordered_json& j) { text(name, j.dump(2) + "\n"); }

  void text(const std::string& name, const std::string& body) {
    const std::string path = (dir_ / name).string();
    write_text_file(path, body);
    std::cout << "wrote " << path << "\n";
  }

 private:
  std::filesystem::path dir_;
};

int fit_status(bool usable, std::string_view what) {
  if (usable) return kExitOk;
  std::cerr << "error: " << what << " fit did not converge or is unidentifiable (data written)\n";
  return kExitFit;
}

std::vector<DataPoint> plot_points(const std::vector<DecayPoint>& points) {
  std::vector<DataPoint> out;
  for (const auto& p : points) out.push_back({p.length, p.fidelity, p.std_error});
  return out;
}

int write_rb_outputs(Output& out, const std::string& stem, const RbDataset& data, int bootstrap,
                     const ExperimentConfig& cfg) {
  const std::vector<DecayPoint> avg = average_by_truncation(data);
  out.csv(stem + "_results.csv", [&](std::ostream& s) { write_rb_results(s, data); });
  out.csv(stem + "_average.csv", [&](std::ostream& s) { write_decay_points(s, avg); });
  out.csv("plot_" + stem + ".csv", [&](std::ostream& s) { write_plot(s, plot_points(avg)); });
  const DecayFit fit = fit_rb_decay(avg);
  auto j = fit_to_json(fit);
  if (bootstrap > 0) j["bootstrap"] = bootstrap_to_json(bootstrap_rb(to_curves(data), bootstrap, cfg.master_seed,
                                                                      0.95, cfg.workers));
  out.json(stem + "_fit.json", j);
  std::cout << fmt::format("d_if = {:.4g} +/- {:.2g}, d = {:.4g} +/- {:.2g}, E_g = {:.4g} +/- {:.2g}\n", fit.d_if,
                           fit.d_if_error, fit.d, fit.d_error, fit.e_g, fit.e_g_error);
  return fit_status(fit.converged, "RB decay");
}

int cmd_rb(const CommonOptions& o, int bootstrap) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const RbDataset data = run_rb(cfg.experiment);
  out.json("rb_meta.json", sidecar("rb", cfg, code_version()));
  return write_rb_outputs(out, "rb", data, bootstrap, cfg.experiment);
}

int cmd_refocus(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const RefocusResult r = run_refocusing_study(cfg.experiment);
  out.json("refocus_meta.json", sidecar("refocus", cfg, code_version()));
  return write_rb_outputs(out, "refocus", r.data, 0, cfg.experiment);
}

int cmd_ramsey(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const RamseyResult r = run_ramsey(cfg.scans.ramsey_detuning, cfg.scans.ramsey_delays, cfg.experiment);
  out.json("ramsey_meta.json", sidecar("ramsey", cfg, code_version()));
  out.csv("ramsey_signal.csv", [&](std::ostream& s) { write_scan(s, r.signal, "delay_s", "p0"); });
  out.csv("plot_ramsey.csv", [&](std::ostream& s) { write_plot(s, to_points(r.signal)); });
  out.json("ramsey_fit.json", fit_to_json(r.fit, {{"frequency", "hz"}, {"tau", "s"}, {"phase", "rad"}}));
  std::cout << fmt::format("fringe frequency = {:.6g} Hz, gaussian decay time = {:.4g} s\n",
                           r.fit.value("frequency"), r.fit.value("tau"));
  return fit_status(r.fit.ok(), "Ramsey");
}

int cmd_echo(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const EchoResult r =
      run_spin_echo(cfg.scans.echo_times, cfg.scans.echo_offsets, cfg.scans.echo_detuning, cfg.experiment);
  out.json("echo_meta.json", sidecar("echo", cfg, code_version()));
  out.csv("echo_fringes.csv", [&](std::ostream& s) {
    s << "T_s,delta_t_s,p0,std_error\n";
    for (const EchoPoint& p : r.points) {
      for (const ScanRow& row : p.fringe.rows) {
        s << format_number(p.total_time) << ',' << format_number(row.x) << ',' << format_number(row.y) << ','
          << format_number(row.std_error) << '\n';
      }
    }
  });
  out.csv("echo_amplitudes.csv", [&](std::ostream& s) {
    s << "T_s,amplitude,std_error,flagged\n";
    for (const EchoPoint& p : r.points) {
      s << format_number(p.total_time) << ',' << format_number(p.amplitude) << ','
        << format_number(p.amplitude_error) << ',' << (p.flagged ? 1 : 0) << '\n';
    }
  });
  out.csv("plot_echo.csv", [&](std::ostream& s) { write_plot(s, to_points(r.amplitudes)); });
  out.json("echo_fit.json", fit_to_json(r.decay, {{"tau", "s"}}));
  std::cout << fmt::format("echo decay time tau_s = {:.4g} +/- {:.2g}\n", r.decay.value("tau"),
                           r.decay.error("tau"));
  return fit_status(r.decay.ok(), "echo decay");
}

int write_sweep(Output& out, const std::string& stem, const ScanDataset& scan, const std::string& x_column,
                double x_scale, const std::string& unit) {
  out.csv(stem + "_sweep.csv", [&](std::ostream& s) { write_scan(s, scan, x_column, "fidelity", x_scale); });
  const std::vector<DataPoint> points = to_points(scan, x_scale);
  out.csv("plot_" + stem + ".csv", [&](std::ostream& s) { write_plot(s, points); });
  const SweepFit fit = fit_gaussian(points);
  out.json(stem + "_fit.json", fit_to_json(fit, {{"center", unit}, {"width", unit}}));
  std::cout << fmt::format("peak = {:.4g} {}, width = {:.4g} {}\n", fit.value("center"), unit, fit.value("width"),
                           unit);
  return fit_status(fit.ok(), "gaussian");
}

int cmd_sweep_detuning(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const ScanDataset scan = run_detuning_sweep(cfg.scans.detuning_grid, cfg.experiment);
  out.json("detuning_meta.json", sidecar("sweep-detuning", cfg, code_version()));
  return write_sweep(out, "detuning", scan, "detuning_hz", 1.0 / kTwoPi, "hz");
}

int cmd_sweep_duration(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const ScanDataset scan = run_duration_sweep(cfg.scans.duration_grid, cfg.experiment);
  out.json("duration_meta.json", sidecar("sweep-duration", cfg, code_version()));
  return write_sweep(out, "duration", scan, "duration_offset_us", 1e6, "us");
}

int cmd_hold_time(const CommonOptions& o) {
  const RunConfig cfg = load(o);
  Output out(o.out);
  const HoldTimeResult r = run_hold_time(cfg.scans.hold_time_grid, cfg.experiment);
  out.json("hold_time_meta.json", sidecar("hold-time", cfg, code_version()));
  out.csv("hold_time.csv", [&](std::ostream& s) {
    s << "hold_time_s,total_time_s,fidelity,std_error\n";
    for (std::size_t i = 0; i < r.by_hold_time.rows.size(); ++i) {
      s << format_number(r.by_hold_time.rows[i].x) << ',' << format_number(r.by_total_time.rows[i].x) << ','
        << format_number(r.by_hold_time.rows[i].y) << ',' << format_number(r.by_hold_time.rows[i].std_error)
        << '\n';
    }
  });
  out.csv("plot_hold_time.csv", [&](std::ostream& s) { write_plot(s, to_points(r.by_total_time)); });
  out.json("hold_time_fit.json", fit_to_json(r.decay, {{"tau", "s"}}));
  std::cout << fmt::format("decay constant vs total time tau_s = {:.4g} +/- {:.2g}\n", r.decay.value("tau"),
                           r.decay.error("tau"));
  return fit_status(r.decay.ok(), "hold-time decay");
}

int cmd_fit(const std::string& model, const std::string& in, const std::string& out_path) {
  const CsvTable table = read_csv_file(in);
  nlohmann::ordered_json j;
  bool usable = false;
  try {
    if (model == "rb") {
      const DecayFit fit = fit_rb_decay(read_rb_points(table));
      j = fit_to_json(fit);
      usable = fit.converged;
    } else {
      const std::vector<DataPoint> points = read_xy_points(table);
      SweepFit fit;
      if (model == "gaussian") fit = fit_gaussian(points);
      if (model == "exponential") fit = fit_exponential(points);
      if (model == "sinusoid") fit = fit_sinusoid(points);
      if (model == "damped-sinusoid") fit = fit_damped_sinusoid(points, Envelope::kExponential);
      j = fit_to_json(fit);
      usable = fit.ok();
    }
  } catch (const std::invalid_argument& e) {
    throw CsvError(fmt::format("{}: {}", in, e.what()));
  }
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
  return fit_status(usable, model);
}

int cmd_paper_suite(const CommonOptions& o) {
  SuiteOptions options;
  if (o.seed) options.seed = *o.seed;
  if (o.ensemble) options.ensemble = *o.ensemble;
  if (o.workers) options.workers = *o.workers;
  const std::vector<SuiteRow> rows = run_paper_suite(options);
  Output out(o.out);
  const std::string table = format_suite_table(rows);
  std::cout << table;
  out.text("paper_suite.txt", table);
  out.json("paper_suite.json", suite_to_json(rows));
  for (const SuiteRow& r : rows) {
    if (!r.pass) {
      std::cerr << "failed: " << r.id << "\n";
    }
  }
  return suite_to_json(rows)["all_pass"].get<bool>() ? kExitOk : kExitSuiteFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized benchmarking simulator for a single qubit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));

  CommonOptions common;
  int bootstrap = 0;
  auto* rb = app.add_subcommand("rb", "randomized benchmarking decay");
  add_common(rb, common);
  rb->add_option("--bootstrap", bootstrap, "sequence-bootstrap resamples (0: off, else >= 100)");
  auto* ramsey = app.add_subcommand("ramsey", "detuned Ramsey fringes");
  auto* echo = app.add_subcommand("echo", "detuned spin echo amplitude versus T");
  auto* sweep_detuning = app.add_subcommand("sweep-detuning", "fidelity at fixed length versus detuning");
  auto* sweep_duration = app.add_subcommand("sweep-duration", "fidelity at fixed length versus pulse duration");
  auto* hold = app.add_subcommand("hold-time", "fidelity versus hold time between pulses");
  auto* refocus = app.add_subcommand("refocus", "RB with static detuning disorder only");
  auto* suite = app.add_subcommand("paper-suite", "all reproduction targets with tolerances");
  for (auto* cmd : {ramsey, echo, sweep_detuning, sweep_duration, hold, refocus, suite}) add_common(cmd, common);

  std::string model, in, out;
  auto* fit = app.add_subcommand("fit", "fit a model to a CSV file");
  fit->add_option("--model", model, "rb, gaussian, exponential, sinusoid or damped-sinusoid")
      ->required()
      ->check(CLI::IsMember({"rb", "gaussian", "exponential", "sinusoid", "damped-sinusoid"}));
  fit->add_option("--in", in, "input CSV")->required();
  fit->add_option("--out", out, "output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (rb->parsed()) {
      if (bootstrap != 0 && bootstrap < 100) throw ConfigError("--bootstrap must be 0 or >= 100");
      return cmd_rb(common, bootstrap);
    }
    if (ramsey->parsed()) return cmd_ramsey(common);
    if (echo->parsed()) return cmd_echo(common);
    if (sweep_detuning->parsed()) return cmd_sweep_detuning(common);
    if (sweep_duration->parsed()) return cmd_sweep_duration(common);
    if (hold->parsed()) return cmd_hold_time(common);
    if (refocus->parsed()) return cmd_refocus(common);
    if (suite->parsed()) return cmd_paper_suite(common);
    if (fit->parsed()) return cmd_fit(model, in, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CsvError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInput;
}
