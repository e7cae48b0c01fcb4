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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qrb/experiments.hpp"

namespace qrb {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.plan.n_cg = 2;
  cfg.plan.n_pr = 2;
  cfg.plan.truncations = {1, 21, 145};
  cfg.ensemble_size = 20;
  return cfg;
}

double mean_at(const RbDataset& data, int truncation) {
  for (const DecayPoint& p : average_by_truncation(data)) {
    if (p.length == truncation) return p.fidelity;
  }
  throw std::out_of_range("truncation not in dataset");
}

TEST(RunRb, IdenticalAcrossWorkerCounts) {
  ExperimentConfig cfg = small_config();
  cfg.noise.t2 = 0.05;
  cfg.noise.static_detuning_sigma = 200.0;
  cfg.noise.amplitude_noise_sigma = 0.01;
  cfg.workers = 1;
  const RbDataset a = run_rb(cfg);
  cfg.workers = 4;
  const RbDataset b = run_rb(cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].fidelity, b.rows[i].fidelity);
    EXPECT_EQ(a.rows[i].std_error, b.rows[i].std_error);
  }
}

TEST(RunRb, RowOrderAndSeed) {
  const RbDataset data = run_rb(small_config());
  ASSERT_EQ(data.rows.size(), 12u);
  EXPECT_EQ(data.rows[0].truncation, 1);
  EXPECT_EQ(data.rows[2].truncation, 145);
  EXPECT_EQ(data.rows[3].pr_id, 1u);
  EXPECT_EQ(data.rows[6].cg_id, 1u);
  EXPECT_EQ(data.master_seed, 1u);
}

TEST(RunRb, StdErrorShrinksAsInverseRootN) {
  ExperimentConfig cfg = small_config();
  cfg.plan.n_cg = 1;
  cfg.plan.n_pr = 1;
  cfg.plan.truncations = {145};
  cfg.noise.static_detuning_sigma = 200.0;
  cfg.noise.amplitude_inhomogeneity_sigma = 0.02;
  std::vector<double> scaled;
  for (std::size_t n : {50u, 200u, 800u, 3200u}) {
    cfg.ensemble_size = n;
    scaled.push_back(run_rb(cfg).rows[0].std_error * std::sqrt(double(n)));
  }
  for (double s : scaled) EXPECT_NEAR(s / scaled.back(), 1.0, 0.25);
}

TEST(RunRb, GateDepolarizationFollowsClosedForm) {
  ExperimentConfig cfg = small_config();
  cfg.noise.gate_depolarization = 2.7e-4;
  const RbDataset data = run_rb(cfg);
  for (const RbRow& r : data.rows) {
    EXPECT_NEAR(r.fidelity, 0.5 + 0.5 * std::pow(1.0 - 2.7e-4, r.truncation), 1e-12);
  }
  const DecayFit fit = fit_rb_decay(average_by_truncation(data));
  EXPECT_NEAR(fit.d, 2.7e-4, 1e-10);
}

TEST(RunRb, ShotsAreBinomial) {
  ExperimentConfig cfg = small_config();
  cfg.noise.gate_depolarization = 1e-3;
  cfg.shots = 400;
  const RbDataset data = run_rb(cfg);
  for (const RbRow& r : data.rows) {
    EXPECT_DOUBLE_EQ(r.fidelity * 400.0, std::round(r.fidelity * 400.0));
    EXPECT_NEAR(r.std_error, std::sqrt(r.fidelity * (1 - r.fidelity) / 400.0), 1e-15);
  }
  EXPECT_EQ(run_rb(cfg).rows[5].fidelity, data.rows[5].fidelity);
}

TEST(RunRb, RejectsInvalidConfig) {
  ExperimentConfig cfg = small_config();
  cfg.ensemble_size = 0;
  EXPECT_THROW(run_rb(cfg), std::invalid_argument);
  cfg = small_config();
  cfg.plan.truncations = {5, 3};
  EXPECT_THROW(run_rb(cfg), std::invalid_argument);
}

TEST(HoldTime, ZeroHoldMatchesRb) {
  ExperimentConfig cfg;
  cfg.ensemble_size = 10;
  cfg.noise.t2 = 0.28;
  cfg.noise.static_detuning_sigma = 40.0;
  cfg.plan.n_cg = cfg.sweep.n_cg;
  cfg.plan.n_pr = cfg.sweep.n_pr;
  cfg.plan.truncations = {1, cfg.sweep.truncation};
  const std::vector<double> holds{0.0, 1e-4, 2e-4};
  const HoldTimeResult hold = run_hold_time(holds, cfg);
  EXPECT_NEAR(hold.by_hold_time.rows[0].y, mean_at(run_rb(cfg), cfg.sweep.truncation), 1e-14);
  EXPECT_LT(hold.by_hold_time.rows[1].y, hold.by_hold_time.rows[0].y);
  EXPECT_GT(hold.by_total_time.rows[1].x, hold.by_total_time.rows[0].x);
}

TEST(HoldTime, PureDephasingStretchesDecayTime) {
  // Pole states do not dephase; averaged over Pauli eigenstates the fidelity
  // decays at 2/3 of the transverse rate.
  ExperimentConfig cfg;
  cfg.noise.t2 = 0.28;
  cfg.noise.t2_isotropic_fraction = 0.0;
  const HoldTimeResult r = run_hold_time(linear_grid(0.0, 1e-3, 11), cfg);
  ASSERT_TRUE(r.decay.ok());
  EXPECT_NEAR(r.decay.value("tau"), 1.5 * 0.28, 0.05 * 0.42);
  cfg.noise.t2_isotropic_fraction = 1.0;
  EXPECT_NEAR(run_hold_time(linear_grid(0.0, 1e-3, 11), cfg).decay.value("tau"), 0.28, 0.05 * 0.28);
}

TEST(HoldTime, StaticDisorderAloneBarelyDecays) {
  ExperimentConfig cfg;
  cfg.ensemble_size = 40;
  cfg.noise.static_detuning_sigma = 40.0;
  const HoldTimeResult r = run_hold_time(linear_grid(0.0, 1e-3, 5), cfg);
  const double drop = r.by_hold_time.rows.front().y - r.by_hold_time.rows.back().y;
  const double span = r.by_total_time.rows.back().x - r.by_total_time.rows.front().x;
  // An exponential with tau = 1 s would lose about span/2 of contrast.
  EXPECT_LT(drop, 0.5 * span / 1.0);
}

TEST(Ramsey, NoiselessMatchesSpinorOracle) {
  ExperimentConfig cfg;
  const double detuning = kTwoPi * 1000.0;
  const std::vector<double> delays = linear_grid(0.0, 2e-3, 21);
  const RamseyResult r = run_ramsey(detuning, delays, cfg);
  const double t = cfg.timing.t_half_pi, rabi = std::numbers::pi / 2 / t;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    const oracle::Mat u = oracle::propagator(rabi, 0.0, detuning, t) * oracle::propagator(0.0, 0.0, detuning, delays[i]) *
                          oracle::propagator(rabi, 0.0, detuning, t);
    EXPECT_NEAR(r.signal.rows[i].y, std::norm(u(0, 0)), 1e-12) << delays[i];
  }
  EXPECT_NEAR(r.fit.value("frequency"), 1000.0, 1e-3);
}

TEST(Ramsey, StaticDisorderGivesGaussianDecay) {
  ExperimentConfig cfg;
  cfg.ensemble_size = 2000;
  cfg.noise.static_detuning_sigma = 40.0;
  const RamseyResult r = run_ramsey(kTwoPi * 1000.0, linear_grid(0.0, 13.5e-3, 136), cfg);
  ASSERT_TRUE(r.fit.ok());
  EXPECT_NEAR(r.fit.value("tau"), 0.025, 0.1 * 0.025);
}

TEST(SpinEcho, StaticDisorderIsRefocused) {
  ExperimentConfig cfg;
  cfg.ensemble_size = 200;
  cfg.noise.static_detuning_sigma = 40.0;
  const std::vector<double> times{0.05, 0.1, 0.3, 0.6};
  const EchoResult r = run_spin_echo(times, linear_grid(0.0, 1.5e-3, 31), kTwoPi * 1000.0, cfg);
  double lo = 1.0, hi = 0.0;
  for (const EchoPoint& p : r.points) {
    ASSERT_FALSE(p.flagged);
    lo = std::min(lo, p.amplitude);
    hi = std::max(hi, p.amplitude);
  }
  EXPECT_LT((hi - lo) / hi, 0.005);
}

TEST(SpinEcho, HomogeneousDecayRecoversT2) {
  ExperimentConfig cfg;
  cfg.noise.t2 = 0.28;
  const std::vector<double> times{0.0, 0.1, 0.2, 0.4, 0.8};
  const EchoResult r = run_spin_echo(times, linear_grid(0.0, 1.5e-3, 31), kTwoPi * 1000.0, cfg);
  ASSERT_TRUE(r.decay.ok());
  EXPECT_NEAR(r.decay.value("tau"), 0.28, 0.01 * 0.28);
}

TEST(Sweeps, DetuningPeakSitsAtSystematicOffset) {
  ExperimentConfig cfg;
  cfg.noise.systematic_detuning = kTwoPi * -10.0;
  const std::vector<double> grid{kTwoPi * -60.0, kTwoPi * -10.0, kTwoPi * 40.0};
  const ScanDataset s = run_detuning_sweep(grid, cfg);
  EXPECT_NEAR(s.rows[1].y, 1.0, 1e-9);
  EXPECT_LT(s.rows[0].y, 0.99);
  EXPECT_LT(s.rows[2].y, 0.99);
}

TEST(Sweeps, DurationPeakAndFullOffset) {
  ExperimentConfig cfg;
  const double t = cfg.timing.t_half_pi;
  const std::vector<double> grid{-0.5e-6, 0.0, 0.5e-6, t};
  const ScanDataset s = run_duration_sweep(grid, cfg);
  EXPECT_NEAR(s.rows[1].y, 1.0, 1e-9);
  EXPECT_LT(s.rows[0].y, 0.9);
  EXPECT_LT(s.rows[2].y, 0.9);
  // Every pi/2 becomes a pi pulse: the outcome no longer tracks the recovery.
  EXPECT_NEAR(s.rows[3].y, 0.5, 0.2);
}

TEST(Sweeps, RejectBadGrids) {
  const ExperimentConfig cfg;
  const std::vector<double> descending{1.0, 0.0};
  EXPECT_THROW(run_detuning_sweep(descending, cfg), std::invalid_argument);
  EXPECT_THROW(run_duration_sweep(std::vector<double>{}, cfg), std::invalid_argument);
  const std::vector<double> negative{-1e-3, 0.0};
  EXPECT_THROW(run_hold_time(negative, cfg), std::invalid_argument);
}

TEST(Refocus, NoDisorderNoError) {
  ExperimentConfig cfg = small_config();
  const RefocusResult r = run_refocusing_study(cfg);
  EXPECT_NEAR(r.fit.e_g, 0.0, 1e-10);
}

TEST(Refocus, ShortSequencesInsensitiveToDisorder) {
  ExperimentConfig cfg = small_config();
  cfg.noise.t2 = 0.01;  // ignored by the study
  cfg.noise.static_detuning_sigma = 40.0;
  const double f1 = mean_at(run_refocusing_study(cfg).data, 1);
  cfg.noise.static_detuning_sigma = 80.0;
  const double f2 = mean_at(run_refocusing_study(cfg).data, 1);
  EXPECT_GT(f1, 0.9999);
  EXPECT_NEAR(f1, f2, 1e-4);
}

TEST(Helpers, GridsAndKeys) {
  const auto g = linear_grid(-1.0, 1.0, 5);
  EXPECT_EQ(g, (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
  EXPECT_EQ(job_key(1, 2, 3), (1ull << 40) | (2ull << 20) | 3ull);
  EXPECT_THROW(job_key(1u << 20, 0, 1), std::invalid_argument);
  const ScanPlans plans = default_scan_plans();
  EXPECT_EQ(plans.detuning_grid.size(), 33u);
  EXPECT_EQ(plans.ramsey_delays.size(), 136u);
  EXPECT_NEAR(plans.detuning_grid.front(), kTwoPi * -400.0, 1e-9);
}

}  // namespace
}  // namespace qrb
