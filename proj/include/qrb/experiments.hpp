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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrb/analysis.hpp"
#include "qrb/bootstrap.hpp"
#include "qrb/noise_models.hpp"
#include "qrb/rb_sequences.hpp"

namespace qrb {

struct SequencePlan {
  std::size_t n_cg = 4;
  std::size_t n_pr = 8;
  std::vector<int> truncations = default_truncations();
};

/// Fixed-length sequences used by the sweeps and the hold-time run.
struct SweepPlan {
  std::size_t n_cg = 4;
  std::size_t n_pr = 4;
  int truncation = 500;
};

struct ExperimentConfig {
  TimingConfig timing;
  NoiseConfig noise;
  std::size_t ensemble_size = 200;
  SequencePlan plan;
  SweepPlan sweep;
  FrameMode frame_mode = FrameMode::kVirtual;
  std::uint64_t master_seed = 1;
  int workers = 0;  ///< 0: all available cores; never changes results
  int shots = 0;    ///< 0: exact ensemble mean; otherwise binomial sampling per job

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Scan grids for the non-RB experiments. Angular quantities in rad/s.
struct ScanPlans {
  std::vector<double> detuning_grid;  ///< rad/s
  std::vector<double> duration_grid;  ///< s, per pi/2
  std::vector<double> hold_time_grid; ///< s
  double ramsey_detuning = 0.0;       ///< rad/s
  std::vector<double> ramsey_delays;  ///< s
  double echo_detuning = 0.0;         ///< rad/s
  std::vector<double> echo_times;     ///< s, total free evolution T
  std::vector<double> echo_offsets;   ///< s, delta t
};

ScanPlans default_scan_plans();

/// Evenly spaced values from `start` to `stop` inclusive.
std::vector<double> linear_grid(double start, double stop, std::size_t count);

struct RbRow {
  std::size_t cg_id = 0;
  std::size_t pr_id = 0;
  int truncation = 0;
  double fidelity = 0.0;
  double std_error = 0.0;
};

struct RbDataset {
  std::vector<RbRow> rows;  ///< cg-major, then pr, then truncation
  std::uint64_t master_seed = 0;
};

/// Mean over sequences at each truncation, with the standard error over sequences.
std::vector<DecayPoint> average_by_truncation(const RbDataset& data);

/// Per-sequence curves for the sequence bootstrap.
SequenceCurves to_curves(const RbDataset& data);

struct ScanRow {
  double x = 0.0;
  double y = 0.0;
  double std_error = 0.0;
};

struct ScanDataset {
  std::vector<ScanRow> rows;
  std::uint64_t master_seed = 0;
};

std::vector<DataPoint> to_points(const ScanDataset& data, double x_scale = 1.0);

/// Stable key of an RB job; seeds its per-atom noise streams.
std::uint64_t job_key(std::size_t cg_id, std::size_t pr_id, int truncation);

RbDataset run_rb(const ExperimentConfig& config);

struct RamseyResult {
  ScanDataset signal;  ///< x = delay (s), y = p0
  SweepFit fit;        ///< damped sinusoid with gaussian envelope
};

/// pi/2 - wait - pi/2 at an extra drive detuning; no prep or readout pulses.
RamseyResult run_ramsey(double detuning, std::span<const double> delays, const ExperimentConfig& config);

struct EchoPoint {
  double total_time = 0.0;
  double amplitude = 0.0;
  double amplitude_error = 0.0;
  bool flagged = false;  ///< fringe fit unreliable; amplitude reported as 0
  ScanDataset fringe;    ///< x = delta t (s), y = p0
};

struct EchoResult {
  std::vector<EchoPoint> points;
  ScanDataset amplitudes;  ///< x = T (s), y = amplitude
  SweepFit decay;          ///< exponential in T
};

/// pi/2 - T/2 - pi - T/2 + delta t - pi/2 for every (T, delta t).
EchoResult run_spin_echo(std::span<const double> times, std::span<const double> offsets, double detuning,
                         const ExperimentConfig& config);

/// Fidelity of the sweep sequences at each drive offset x (rad/s). The
/// effective detuning is x - systematic_detuning, so the peak sits at the
/// configured systematic offset.
ScanDataset run_detuning_sweep(std::span<const double> grid, const ExperimentConfig& config);

/// As above for the per-pi/2 duration offset (s).
ScanDataset run_duration_sweep(std::span<const double> grid, const ExperimentConfig& config);

struct HoldTimeResult {
  ScanDataset by_hold_time;   ///< x = t_h (s)
  ScanDataset by_total_time;  ///< x = sequence duration (s)
  SweepFit decay;             ///< exponential in total time
};

HoldTimeResult run_hold_time(std::span<const double> hold_times, const ExperimentConfig& config);

struct RefocusResult {
  RbDataset data;
  DecayFit fit;
};

/// Full RB with static detuning disorder as the only noise source.
RefocusResult run_refocusing_study(const ExperimentConfig& config);

}  // namespace qrb
