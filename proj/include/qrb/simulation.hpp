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
#include <span>
#include <vector>

#include "qrb/noise_models.hpp"
#include "qrb/rb_sequences.hpp"

namespace qrb {

struct SimulationSettings {
  TimingConfig timing;
  NoiseConfig noise;
  std::uint64_t master_seed = 1;
  /// Wrap each schedule in the state-preparation and readout pi pulses.
  /// Without them the atom starts in |0> and is read out directly.
  bool prep_and_readout = true;
};

/// Noisy evolution of one atom through a schedule. `rng` supplies the
/// per-pulse amplitude jitter and scattering trajectories.
BlochState evolve_schedule(const CompiledSchedule& schedule, const BlochState& initial, const AtomInstance& atom,
                           const SimulationSettings& settings, RandomStream& rng);

/// Probability that one atom reports the schedule's expected outcome,
/// including preparation, readout transfer and readout flips.
double atom_fidelity(const CompiledSchedule& schedule, const AtomInstance& atom, const SimulationSettings& settings,
                     RandomStream& rng);

/// Qubit state right after the (noisy) preparation pulse.
BlochState prepared_state(const AtomInstance& atom, const SimulationSettings& settings, RandomStream& rng);

std::vector<AtomInstance> sample_ensemble(const NoiseConfig& noise, std::uint64_t master_seed, std::size_t n_atoms);

struct EnsembleInput {
  std::span<const CompiledSchedule> schedules;
  /// One stable key per schedule; seeds the (job, atom) noise streams.
  std::span<const std::uint64_t> job_keys;
  std::span<const AtomInstance> atoms;
};

/// Row-major [job][atom] fidelities. Reference implementation, one thread.
std::vector<double> ensemble_fidelities_serial(const EnsembleInput& input, const SimulationSettings& settings);

/// Same result as the serial kernel, bit for bit, for any worker count.
/// workers <= 0 uses the OpenMP default.
std::vector<double> ensemble_fidelities(const EnsembleInput& input, const SimulationSettings& settings,
                                        int workers = 0);

struct JobStatistics {
  std::vector<double> mean;
  std::vector<double> std_error;  ///< sample std over atoms / sqrt(n_atoms)
};

/// Fixed-order reduction of a [job][atom] matrix.
JobStatistics reduce_by_job(std::span<const double> fidelities, std::size_t n_atoms);

}  // namespace qrb
