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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qrb/dataset_io.hpp"
#include "qrb/experiments.hpp"
#include "qrb/reproduction.hpp"
#include "qrb/simulation.hpp"

namespace {

using namespace qrb;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome from_rows(const std::vector<SuiteRow>& rows) {
  Outcome out;
  for (const SuiteRow& r : rows) {
    out.pass = out.pass && r.pass;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += fmt::format("{} = {:.4g} in [{:.4g}, {:.4g}]{}", r.id, r.simulated, r.lower, r.upper,
                              r.pass ? "" : " (out of band)");
  }
  return out;
}

Outcome noiseless_identity() {
  const auto start = std::chrono::steady_clock::now();
  const TimingConfig timing;
  const RbSequenceSet set = build_sequence_set(4, 8, default_truncations(), 1);
  std::vector<CompiledSchedule> schedules;
  std::vector<std::uint64_t> keys;
  for (const RbJob& job : set.jobs()) {
    schedules.push_back(compile_job(set, job, timing));
    keys.push_back(job_key(job.cg_id, job.pr_id, job.truncation));
  }
  // Full 200-atom ensemble through the serial reference kernel, no shortcut.
  const SimulationSettings settings{timing, NoiseConfig{}, 1, true};
  const std::vector<AtomInstance> atoms = sample_ensemble(settings.noise, 1, 200);
  const std::vector<double> f = ensemble_fidelities_serial({schedules, keys, atoms}, settings);
  double worst = 0.0;
  for (double v : f) worst = std::max(worst, std::abs(v - 1.0));
  const RbDataset data = run_rb(ExperimentConfig{});
  for (const RbRow& r : data.rows) worst = std::max(worst, std::abs(r.fidelity - 1.0));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {schedules.size() == 480 && data.rows.size() == 480 && worst <= 1e-9 && seconds < 60.0,
          fmt::format("{} jobs x 200 atoms, max |F - 1| = {:.2g}, {:.1f} s", schedules.size(), worst, seconds)};
}

Outcome property_suites() {
  std::vector<std::string> failures;
  const auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  // Frame-change equivalence.
  {
    const RbSequenceSet set = build_sequence_set(2, 4, {1, 55, 380}, 2);
    const TimingConfig timing;
    NoiseConfig noise;
    noise.t2 = 0.28;
    noise.static_detuning_sigma = 40.0;
    noise.systematic_detuning = -60.0;
    const SimulationSettings settings{timing, noise, 2, true};
    const auto atoms = sample_ensemble(noise, 2, 4);
    double worst = 0.0;
    for (const RbJob& job : set.jobs()) {
      const CompiledSchedule v = compile_job(set, job, timing, FrameMode::kVirtual);
      const CompiledSchedule p = compile_job(set, job, timing, FrameMode::kPhysical);
      for (const AtomInstance& atom : atoms) {
        RandomStream r1(1), r2(1);
        worst = std::max(worst, std::abs(atom_fidelity(v, atom, settings, r1) - atom_fidelity(p, atom, settings, r2)));
      }
    }
    check(worst <= 1e-12, fmt::format("frame change differs by {:.2g}", worst));
  }

  // Slot-count law and the 995-gate anchor.
  {
    const RbSequenceSet set = build_sequence_set(4, 8, default_truncations(), 1);
    bool law = true;
    std::size_t longest = 0;
    for (const RbJob& job : set.jobs()) {
      const std::size_t n = compile_job(set, job, TimingConfig{}).slots.size();
      law = law && n == static_cast<std::size_t>(2 * job.truncation + 3);
      longest = std::max(longest, n);
    }
    check(law && longest == 1993, fmt::format("slot count law broken (longest {})", longest));
  }

  // Decay-model fit round trip.
  {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u_if(0.0, 0.1), u_d(1e-6, 1e-2);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double d_if = u_if(gen), d = u_d(gen);
      std::vector<DecayPoint> pts;
      for (int l : default_truncations()) pts.push_back({double(l), rb_model(l, d_if, d), 0.0});
      const DecayFit fit = fit_rb_decay(pts);
      worst = std::max({worst, std::abs(fit.d - d), std::abs(fit.d_if - d_if)});
    }
    check(worst <= 1e-10, fmt::format("fit round trip error {:.2g}", worst));
  }

  // Channel contractivity.
  {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    NoiseConfig noise;
    noise.t2 = 0.01;
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      Eigen::Vector3d v(g(gen), g(gen), g(gen));
      const BlochState b = BlochState::from_vector(v.normalized() * std::abs(std::tanh(g(gen))));
      const double n = b.norm() + 1e-12;
      ok = ok && dephase(b, 1e-3, 0.01).norm() <= n && depolarize(b, 0.1).norm() <= n &&
           homogeneous_decay(b, 1e-3, noise).norm() <= n &&
           apply(detuned_rotation_map({5e4, g(gen), 3e-5, 100.0 * g(gen)}), b).norm() <= n;
    }
    check(ok, "a channel increased the Bloch vector length");
  }

  // Byte-identical CSVs under worker-count variation.
  {
    ExperimentConfig cfg;
    cfg.plan.n_cg = 2;
    cfg.plan.n_pr = 2;
    cfg.plan.truncations = {1, 21, 145};
    cfg.ensemble_size = 16;
    cfg.noise.t2 = 0.28;
    cfg.noise.static_detuning_sigma = 40.0;
    cfg.noise.amplitude_noise_sigma = 0.01;
    std::string reference;
    bool same = true;
    for (int workers : {1, 2, 5}) {
      cfg.workers = workers;
      std::ostringstream csv;
      write_rb_results(csv, run_rb(cfg));
      if (reference.empty()) reference = csv.str();
      same = same && csv.str() == reference;
    }
    check(same, "CSV output depends on the worker count");
  }

  Outcome out{failures.empty(), "frame change, 2l+3 / 1993 slots, fit round trip, contractivity, worker determinism"};
  for (const std::string& f : failures) out.detail += "; " + f;
  return out;
}

}  // namespace

int main() {
  const SuiteOptions options;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"noiseless identity", noiseless_identity},
      {"depolarization oracle", [&] { return from_rows(depolarization_rows(options)); }},
      {"T2-limited error per gate", [&] { return from_rows(t2_limited_rows(options)); }},
      {"SPAM separation", [&] { return from_rows(spam_rows(options)); }},
      {"detuning sweep", [&] { return from_rows(detuning_sweep_rows(options)); }},
      {"duration sweep", [&] { return from_rows(duration_sweep_rows(options)); }},
      {"Ramsey", [&] { return from_rows(ramsey_rows(options)); }},
      {"spin echo", [&] { return from_rows(echo_rows(options)); }},
      {"hold time", [&] { return from_rows(hold_time_rows(options)); }},
      {"refocusing", [&] { return from_rows(refocus_rows(options)); }},
      {"scattering budget", [&] { return from_rows(scattering_rows(options)); }},
      {"property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += o.pass ? 0 : 1;
    fmt::print("criterion {:>2} {}: {} - {}\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
