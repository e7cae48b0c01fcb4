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

#include <cstdint>
#include <limits>

#include "qrb/random.hpp"
#include "qrb/spin_core.hpp"

namespace qrb {

enum class ScatteringMode { kChannel, kTrajectory };

/// All rates in SI units, detunings in rad/s.
struct NoiseConfig {
  /// Homogeneous (echo-measured) coherence time; infinity disables it.
  double t2 = std::numeric_limits<double>::infinity();
  /// Share of the 1/t2 rate that acts isotropically (shrinks the whole Bloch
  /// vector); the rest is pure dephasing of the transverse components. An
  /// equatorial state decays as exp(-t/t2) for any value.
  double t2_isotropic_fraction = 0.7;
  double static_detuning_sigma = 0.0;
  double amplitude_inhomogeneity_sigma = 0.0;
  double systematic_detuning = 0.0;
  /// Per pi/2 duration error; pi slots get twice this.
  double duration_offset = 0.0;
  double amplitude_noise_sigma = 0.0;
  /// Depolarizing scattering events per second.
  double depolarizing_rate = 0.0;
  ScatteringMode scattering_mode = ScatteringMode::kChannel;
  /// Extra depolarization probability after every computational gate.
  double gate_depolarization = 0.0;
  double spam_flip_prob = 0.0;
  /// Trotter steps per pulse for the dephasing/rotation splitting.
  int pulse_substeps = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;

  double dephasing_rate() const;
  double isotropic_rate() const;
};

/// One ensemble member's static disorder.
struct AtomInstance {
  double static_detuning = 0.0;  ///< rad/s
  double amplitude_factor = 1.0;
};

/// Deterministic in (master_seed, atom_index).
AtomInstance sample_atom(const NoiseConfig& config, std::uint64_t master_seed, std::uint64_t atom_index);

/// Transverse components scaled by exp(-dt / t2).
BlochState dephase(const BlochState& state, double dt, double t2);

/// b -> (1 - p) b.
BlochState depolarize(const BlochState& state, double p);

/// Homogeneous decay over dt: isotropic share of 1/t2 plus scattering (in
/// channel mode), then the dephasing share.
BlochState homogeneous_decay(const BlochState& state, double dt, const NoiseConfig& config);

struct EffectivePulse {
  PulseSpec pulse;
  bool duration_clamped = false;
};

/// Applies systematic and per-atom detuning, the duration offset scaled by
/// `half_pi_units`, and amplitude inhomogeneity plus per-pulse jitter drawn
/// from `rng`. A negative resulting duration is clamped to zero and flagged.
EffectivePulse effective_pulse(const PulseSpec& pulse, int half_pi_units, const AtomInstance& atom,
                               const NoiseConfig& config, RandomStream& rng);

/// Probability that a scattering event happened within dt.
double scattering_probability(double dt, double rate);

/// Channel mode: b -> exp(-rate dt) b. Trajectory mode: b -> 0 with
/// probability 1 - exp(-rate dt), otherwise unchanged.
BlochState scattering_step(const BlochState& state, double dt, double rate, RandomStream& rng,
                           ScatteringMode mode = ScatteringMode::kChannel);

/// Symmetric readout bit flip: probability of reporting the expected outcome.
double apply_readout_flip(double p_expected, double flip_prob);

/// Composition of two independent symmetric flips.
double combine_flips(double a, double b);

}  // namespace qrb
