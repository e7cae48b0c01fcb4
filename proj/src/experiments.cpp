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

#include "qrb/experiments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrb/random.hpp"
#include "qrb/simulation.hpp"

namespace qrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SimulationSettings settings_for(const ExperimentConfig& config, bool prep_and_readout = true) {
  return {config.timing, config.noise, config.master_seed, prep_and_readout};
}

/// True when every atom, and every pulse of it, evolves identically.
bool deterministic(const NoiseConfig& noise) {
  const bool trajectories = noise.scattering_mode == ScatteringMode::kTrajectory && noise.depolarizing_rate > 0.0;
  return noise.static_detuning_sigma == 0.0 && noise.amplitude_inhomogeneity_sigma == 0.0 &&
         noise.amplitude_noise_sigma == 0.0 && !trajectories;
}

/// Ensemble statistics per schedule, optionally resampled as finite shots.
JobStatistics simulate(std::span<const CompiledSchedule> schedules, std::span<const std::uint64_t> keys,
                       const ExperimentConfig& config, bool prep_and_readout = true) {
  const SimulationSettings settings = settings_for(config, prep_and_readout);
  // Identical atoms: one representative gives the exact ensemble mean.
  const std::size_t n_atoms = deterministic(config.noise) ? 1 : config.ensemble_size;
  const std::vector<AtomInstance> atoms = sample_ensemble(config.noise, config.master_seed, n_atoms);
  const std::vector<double> fids = ensemble_fidelities({schedules, keys, atoms}, settings, config.workers);
  JobStatistics stats = reduce_by_job(fids, n_atoms);
  if (config.shots > 0) {
    const double n = static_cast<double>(config.shots);
    for (std::size_t j = 0; j < stats.mean.size(); ++j) {
      RandomStream rng(derive_seed(config.master_seed, StreamTag::kShots, {keys[j]}));
      int hits = 0;
      for (int s = 0; s < config.shots; ++s) hits += rng.uniform() < stats.mean[j] ? 1 : 0;
      const double f = hits / n;
      stats.mean[j] = f;
      stats.std_error[j] = std::sqrt(f * (1.0 - f) / n);
    }
  }
  return stats;
}

/// Fixed-length sweep sequences under a modified config.
double sweep_point(const ExperimentConfig& config, double* std_error, double* duration = nullptr) {
  const RbSequenceSet set =
      build_sequence_set(config.sweep.n_cg, config.sweep.n_pr, {config.sweep.truncation}, config.master_seed);
  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  for (const RbJob& job : set.jobs()) {
    schedules.push_back(compile_job(set, job, config.timing, config.frame_mode));
    keys.push_back(job_key(job.cg_id, job.pr_id, job.truncation));
  }
  const JobStatistics stats = simulate(schedules, keys, config);
  double sum = 0.0;
  for (double m : stats.mean) sum += m;
  const double n = static_cast<double>(stats.mean.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double m : stats.mean) ss += (m - mean) * (m - mean);
  *std_error = stats.mean.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  if (duration) *duration = schedules.front().total_duration;
  return mean;
}

void check_grid(std::span<const double> grid, const char* who) {
  if (grid.empty()) throw std::invalid_argument(std::string(who) + ": empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw std::invalid_argument(std::string(who) + ": grid must be finite and strictly increasing");
    }
  }
}

Slot pulse_slot(double angle, double phase, double duration, SlotRole role) {
  return {SlotKind::kPulse, role, phase, angle, duration};
}

Slot wait_slot(double duration) { return {SlotKind::kIdle, SlotRole::kRecovery, 0.0, 0.0, duration}; }

CompiledSchedule free_evolution(std::vector<Slot> slots) {
  CompiledSchedule s;
  for (const Slot& slot : slots) s.total_duration += slot.duration;
  s.slots = std::move(slots);
  s.expected_outcome = 0;
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  timing.validate();
  noise.validate();
  if (ensemble_size < 1) throw std::invalid_argument("ensemble_size must be >= 1");
  if (plan.n_cg < 1 || plan.n_pr < 1) throw std::invalid_argument("sequence plan needs n_cg, n_pr >= 1");
  if (plan.truncations.empty()) throw std::invalid_argument("sequence plan needs truncations");
  if (sweep.n_cg < 1 || sweep.n_pr < 1 || sweep.truncation < 1) {
    throw std::invalid_argument("sweep plan needs n_cg, n_pr, truncation >= 1");
  }
  if (shots < 0) throw std::invalid_argument("shots must be >= 0");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  if (count < 2) return {start};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

ScanPlans default_scan_plans() {
  ScanPlans p;
  for (double hz : linear_grid(-400.0, 400.0, 33)) p.detuning_grid.push_back(kTwoPi * hz);
  p.duration_grid = linear_grid(-2.5e-6, 2.5e-6, 21);
  p.hold_time_grid = linear_grid(0.0, 1.0e-3, 11);
  p.ramsey_detuning = kTwoPi * 1000.0;
  p.ramsey_delays = linear_grid(0.0, 13.5e-3, 136);
  p.echo_detuning = kTwoPi * 1000.0;
  p.echo_times = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8};
  p.echo_offsets = linear_grid(0.0, 1.5e-3, 31);
  return p;
}

std::uint64_t job_key(std::size_t cg_id, std::size_t pr_id, int truncation) {
  constexpr std::uint64_t kMask = (1ULL << 20) - 1;
  if (cg_id > kMask || pr_id > kMask || truncation < 0 || static_cast<std::uint64_t>(truncation) > kMask) {
    throw std::invalid_argument("job_key: index out of range");
  }
  return (static_cast<std::uint64_t>(cg_id) << 40) | (static_cast<std::uint64_t>(pr_id) << 20) |
         static_cast<std::uint64_t>(truncation);
}

std::vector<DecayPoint> average_by_truncation(const RbDataset& data) {
  const SequenceCurves curves = to_curves(data);
  return average_curves(curves);
}

SequenceCurves to_curves(const RbDataset& data) {
  SequenceCurves curves;
  std::vector<std::pair<std::size_t, std::size_t>> ids;
  for (const RbRow& row : data.rows) {
    const std::pair<std::size_t, std::size_t> id{row.cg_id, row.pr_id};
    if (ids.empty() || ids.back() != id) {
      ids.push_back(id);
      curves.fidelities.emplace_back();
    }
    if (ids.size() == 1) curves.lengths.push_back(row.truncation);
    curves.fidelities.back().push_back(row.fidelity);
  }
  for (const auto& f : curves.fidelities) {
    if (f.size() != curves.lengths.size()) throw std::invalid_argument("RB dataset: ragged truncation lists");
  }
  return curves;
}

std::vector<DataPoint> to_points(const ScanDataset& data, double x_scale) {
  std::vector<DataPoint> out;
  for (const ScanRow& row : data.rows) out.push_back({row.x * x_scale, row.y, row.std_error});
  return out;
}

RbDataset run_rb(const ExperimentConfig& config) {
  config.validate();
  const RbSequenceSet set =
      build_sequence_set(config.plan.n_cg, config.plan.n_pr, config.plan.truncations, config.master_seed);
  const std::vector<RbJob> jobs = set.jobs();
  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  schedules.reserve(jobs.size());
  for (const RbJob& job : jobs) {
    schedules.push_back(compile_job(set, job, config.timing, config.frame_mode));
    keys.push_back(job_key(job.cg_id, job.pr_id, job.truncation));
  }
  const JobStatistics stats = simulate(schedules, keys, config);
  RbDataset data;
  data.master_seed = config.master_seed;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    data.rows.push_back({jobs[j].cg_id, jobs[j].pr_id, jobs[j].truncation, stats.mean[j], stats.std_error[j]});
  }
  return data;
}

RamseyResult run_ramsey(double detuning, std::span<const double> delays, const ExperimentConfig& config) {
  config.validate();
  check_grid(delays, "run_ramsey");
  ExperimentConfig cfg = config;
  cfg.noise.systematic_detuning += detuning;
  const double t = cfg.timing.t_half_pi;
  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    schedules.push_back(free_evolution({pulse_slot(std::numbers::pi / 2, 0.0, t, SlotRole::kRecovery),
                                        wait_slot(delays[i]),
                                        pulse_slot(std::numbers::pi / 2, 0.0, t, SlotRole::kRecovery)}));
    keys.push_back(job_key(i, 0, 0));
  }
  const JobStatistics stats = simulate(schedules, keys, cfg, false);
  RamseyResult out;
  out.signal.master_seed = config.master_seed;
  for (std::size_t i = 0; i < delays.size(); ++i) out.signal.rows.push_back({delays[i], stats.mean[i], stats.std_error[i]});
  out.fit = fit_damped_sinusoid(to_points(out.signal), Envelope::kGaussian);
  return out;
}

EchoResult run_spin_echo(std::span<const double> times, std::span<const double> offsets, double detuning,
                         const ExperimentConfig& config) {
  config.validate();
  check_grid(times, "run_spin_echo");
  check_grid(offsets, "run_spin_echo");
  if (times.front() < 0.0 || offsets.front() < 0.0) throw std::invalid_argument("run_spin_echo: negative time");
  ExperimentConfig cfg = config;
  cfg.noise.systematic_detuning += detuning;
  const double t_half = cfg.timing.t_half_pi;
  const double t_pi = cfg.timing.t_pi;

  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      schedules.push_back(free_evolution({pulse_slot(std::numbers::pi / 2, 0.0, t_half, SlotRole::kRecovery),
                                          wait_slot(0.5 * times[i]),
                                          pulse_slot(std::numbers::pi, 0.0, t_pi, SlotRole::kPauli),
                                          wait_slot(0.5 * times[i] + offsets[j]),
                                          pulse_slot(std::numbers::pi / 2, 0.0, t_half, SlotRole::kRecovery)}));
      keys.push_back(job_key(i, j, 0));
    }
  }
  const JobStatistics stats = simulate(schedules, keys, cfg, false);

  EchoResult out;
  out.amplitudes.master_seed = config.master_seed;
  std::vector<DataPoint> decay_points;
  for (std::size_t i = 0; i < times.size(); ++i) {
    EchoPoint point;
    point.total_time = times[i];
    point.fringe.master_seed = config.master_seed;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const std::size_t k = i * offsets.size() + j;
      point.fringe.rows.push_back({offsets[j], stats.mean[k], stats.std_error[k]});
    }
    const SweepFit fringe = fit_sinusoid(to_points(point.fringe));
    if (fringe.ok()) {
      point.amplitude = fringe.value("amplitude");
      point.amplitude_error = fringe.error("amplitude");
      decay_points.push_back({times[i], point.amplitude, 0.0});
    } else {
      point.flagged = true;
    }
    out.amplitudes.rows.push_back({times[i], point.amplitude, point.amplitude_error});
    out.points.push_back(std::move(point));
  }
  out.decay = fit_exponential(decay_points);
  return out;
}

ScanDataset run_detuning_sweep(std::span<const double> grid, const ExperimentConfig& config) {
  config.validate();
  check_grid(grid, "run_detuning_sweep");
  ScanDataset out;
  out.master_seed = config.master_seed;
  for (double x : grid) {
    ExperimentConfig cfg = config;
    cfg.noise.systematic_detuning = x - config.noise.systematic_detuning;
    double sem = 0.0;
    const double f = sweep_point(cfg, &sem);
    out.rows.push_back({x, f, sem});
  }
  return out;
}

ScanDataset run_duration_sweep(std::span<const double> grid, const ExperimentConfig& config) {
  config.validate();
  check_grid(grid, "run_duration_sweep");
  ScanDataset out;
  out.master_seed = config.master_seed;
  for (double x : grid) {
    ExperimentConfig cfg = config;
    cfg.noise.duration_offset = x - config.noise.duration_offset;
    double sem = 0.0;
    const double f = sweep_point(cfg, &sem);
    out.rows.push_back({x, f, sem});
  }
  return out;
}

HoldTimeResult run_hold_time(std::span<const double> hold_times, const ExperimentConfig& config) {
  config.validate();
  check_grid(hold_times, "run_hold_time");
  if (hold_times.front() < 0.0) throw std::invalid_argument("run_hold_time: negative hold time");
  HoldTimeResult out;
  out.by_hold_time.master_seed = out.by_total_time.master_seed = config.master_seed;
  for (double th : hold_times) {
    ExperimentConfig cfg = config;
    cfg.timing.hold_time = th;
    double sem = 0.0, duration = 0.0;
    const double f = sweep_point(cfg, &sem, &duration);
    out.by_hold_time.rows.push_back({th, f, sem});
    out.by_total_time.rows.push_back({duration, f, sem});
  }
  out.decay = fit_exponential(to_points(out.by_total_time));
  return out;
}

RefocusResult run_refocusing_study(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  NoiseConfig noise;
  noise.static_detuning_sigma = config.noise.static_detuning_sigma;
  noise.pulse_substeps = config.noise.pulse_substeps;
  cfg.noise = noise;
  RefocusResult out;
  out.data = run_rb(cfg);
  out.fit = fit_rb_decay(average_by_truncation(out.data));
  return out;
}

}  // namespace qrb
