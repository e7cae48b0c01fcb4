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

#include "qrb/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qrb {

namespace {

class AtomEvolver {
 public:
  AtomEvolver(const AtomInstance& atom, const SimulationSettings& settings, RandomStream& rng)
      : atom_(atom), noise_(settings.noise), aux_noise_(settings.noise), rng_(rng) {
    // Prep/readout pulses come from a separate synthesizer: no systematic
    // detuning or duration miscalibration of the benchmarking drive.
    aux_noise_.systematic_detuning = 0.0;
    aux_noise_.duration_offset = 0.0;
    dephasing_t2_ = noise_.dephasing_rate() > 0.0 ? 1.0 / noise_.dephasing_rate()
                                                  : std::numeric_limits<double>::infinity();
  }

  BlochState idle(BlochState b, double dt) {
    if (dt <= 0.0) return b;
    const double detuning = noise_.systematic_detuning + atom_.static_detuning;
    if (detuning != 0.0) b = apply(z_rotation_map(-detuning * dt), b);
    b = dephase(b, dt, dephasing_t2_);
    return isotropic(b, dt);
  }

  BlochState pulse(BlochState b, const PulseSpec& nominal, int half_pi_units, bool drive_chain = true) {
    const EffectivePulse eff =
        effective_pulse(nominal, half_pi_units, atom_, drive_chain ? noise_ : aux_noise_, rng_);
    const double dt = eff.pulse.duration;
    const int steps = noise_.pulse_substeps;
    PulseSpec step = eff.pulse;
    step.duration = dt / steps;
    const AffineBlochMap map = detuned_rotation_map(step);
    const double half = 0.5 * step.duration;
    for (int k = 0; k < steps; ++k) {
      b = dephase(b, half, dephasing_t2_);
      b = apply(map, b);
      b = dephase(b, half, dephasing_t2_);
    }
    return isotropic(b, dt);
  }

  BlochState slot(BlochState b, const Slot& slot) {
    const int units = slot.half_pi_units();
    switch (slot.kind) {
      case SlotKind::kPulse: {
        const PulseSpec nominal{slot.angle / slot.duration, slot.phase, slot.duration, 0.0};
        b = pulse(b, nominal, units);
        break;
      }
      case SlotKind::kZRotation:
        b = apply(z_rotation_map(slot.angle), b);
        [[fallthrough]];
      case SlotKind::kIdle:
        b = idle(b, std::max(0.0, slot.duration + units * noise_.duration_offset));
        break;
    }
    if (slot.role == SlotRole::kComputational && noise_.gate_depolarization > 0.0) {
      b = depolarize(b, noise_.gate_depolarization);
    }
    return b;
  }

 private:
  BlochState isotropic(BlochState b, double dt) {
    const double rate = noise_.isotropic_rate();
    if (rate > 0.0) b = BlochState::from_vector(std::exp(-rate * dt) * b.vector());
    if (noise_.scattering_mode == ScatteringMode::kTrajectory && noise_.depolarizing_rate > 0.0) {
      b = scattering_step(b, dt, noise_.depolarizing_rate, rng_, ScatteringMode::kTrajectory);
    }
    return b;
  }

  const AtomInstance& atom_;
  const NoiseConfig& noise_;
  NoiseConfig aux_noise_;
  RandomStream& rng_;
  double dephasing_t2_;
};

PulseSpec aux_pi_pulse(double duration) { return {std::numbers::pi / duration, 0.0, duration, 0.0}; }

double evaluate(const EnsembleInput& input, const SimulationSettings& settings, std::size_t job, std::size_t atom) {
  RandomStream rng(derive_seed(settings.master_seed, StreamTag::kPulseNoise, {input.job_keys[job], atom}));
  return atom_fidelity(input.schedules[job], input.atoms[atom], settings, rng);
}

void check_input(const EnsembleInput& input) {
  if (input.schedules.size() != input.job_keys.size()) {
    throw std::invalid_argument("ensemble: one job key per schedule required");
  }
}

}  // namespace

BlochState evolve_schedule(const CompiledSchedule& schedule, const BlochState& initial, const AtomInstance& atom,
                           const SimulationSettings& settings, RandomStream& rng) {
  AtomEvolver evolver(atom, settings, rng);
  BlochState b = initial;
  for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
    if (i > 0 && schedule.gap > 0.0) b = evolver.idle(b, schedule.gap);
    b = evolver.slot(b, schedule.slots[i]);
  }
  return b;
}

BlochState prepared_state(const AtomInstance& atom, const SimulationSettings& settings, RandomStream& rng) {
  AtomEvolver evolver(atom, settings, rng);
  return evolver.pulse(BlochState::excited(), aux_pi_pulse(settings.timing.prep_pulse), 0, false);
}

double atom_fidelity(const CompiledSchedule& schedule, const AtomInstance& atom, const SimulationSettings& settings,
                     RandomStream& rng) {
  BlochState b = settings.prep_and_readout ? prepared_state(atom, settings, rng) : BlochState::ground();
  b = evolve_schedule(schedule, b, atom, settings, rng);
  const Populations pops = z_populations(b);
  const double p_expected = schedule.expected_outcome == 0 ? pops.p0 : pops.p1;

  double flip = settings.noise.spam_flip_prob;
  if (settings.prep_and_readout) {
    // Readout transfer efficiency of the mapping pi pulse; untransferred
    // atoms are miscounted.
    AtomEvolver evolver(atom, settings, rng);
    const BlochState mapped =
        evolver.pulse(BlochState::ground(), aux_pi_pulse(settings.timing.readout_pulse), 0, false);
    const double transfer = z_populations(mapped).p1;
    flip = combine_flips(flip, 1.0 - transfer);
  }
  return apply_readout_flip(p_expected, flip);
}

std::vector<AtomInstance> sample_ensemble(const NoiseConfig& noise, std::uint64_t master_seed, std::size_t n_atoms) {
  std::vector<AtomInstance> atoms;
  atoms.reserve(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) atoms.push_back(sample_atom(noise, master_seed, i));
  return atoms;
}

std::vector<double> ensemble_fidelities_serial(const EnsembleInput& input, const SimulationSettings& settings) {
  check_input(input);
  const std::size_t n_atoms = input.atoms.size();
  std::vector<double> out(input.schedules.size() * n_atoms);
  for (std::size_t job = 0; job < input.schedules.size(); ++job) {
    for (std::size_t atom = 0; atom < n_atoms; ++atom) {
      out[job * n_atoms + atom] = evaluate(input, settings, job, atom);
    }
  }
  return out;
}

std::vector<double> ensemble_fidelities(const EnsembleInput& input, const SimulationSettings& settings, int workers) {
  check_input(input);
  const std::size_t n_atoms = input.atoms.size();
  const auto total = static_cast<std::int64_t>(input.schedules.size() * n_atoms);
  std::vector<double> out(static_cast<std::size_t>(total));
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::int64_t flat = 0; flat < total; ++flat) {
    const auto job = static_cast<std::size_t>(flat) / n_atoms;
    const auto atom = static_cast<std::size_t>(flat) % n_atoms;
    out[static_cast<std::size_t>(flat)] = evaluate(input, settings, job, atom);
  }
  return out;
}

JobStatistics reduce_by_job(std::span<const double> fidelities, std::size_t n_atoms) {
  if (n_atoms == 0 || fidelities.size() % n_atoms != 0) {
    throw std::invalid_argument("reduce_by_job: matrix shape mismatch");
  }
  const std::size_t n_jobs = fidelities.size() / n_atoms;
  JobStatistics stats;
  stats.mean.resize(n_jobs);
  stats.std_error.resize(n_jobs);
  for (std::size_t j = 0; j < n_jobs; ++j) {
    const auto row = fidelities.subspan(j * n_atoms, n_atoms);
    double sum = 0.0;
    for (double f : row) sum += f;
    const double mean = sum / static_cast<double>(n_atoms);
    double ss = 0.0;
    for (double f : row) ss += (f - mean) * (f - mean);
    stats.mean[j] = mean;
    stats.std_error[j] =
        n_atoms > 1 ? std::sqrt(ss / static_cast<double>(n_atoms - 1) / static_cast<double>(n_atoms)) : 0.0;
  }
  return stats;
}

}  // namespace qrb
