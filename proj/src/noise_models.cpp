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

#include "qrb/noise_models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrb {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("noise config: ") + what);
}

}  // namespace

void NoiseConfig::validate() const {
  require(t2 > 0.0, "t2 must be > 0");
  require(t2_isotropic_fraction >= 0.0 && t2_isotropic_fraction <= 1.0, "t2_isotropic_fraction must be in [0,1]");
  require(static_detuning_sigma >= 0.0, "static_detuning_sigma must be >= 0");
  require(amplitude_inhomogeneity_sigma >= 0.0, "amplitude_inhomogeneity_sigma must be >= 0");
  require(std::isfinite(systematic_detuning), "systematic_detuning must be finite");
  require(std::isfinite(duration_offset), "duration_offset must be finite");
  require(amplitude_noise_sigma >= 0.0, "amplitude_noise_sigma must be >= 0");
  require(depolarizing_rate >= 0.0, "depolarizing_rate must be >= 0");
  require(gate_depolarization >= 0.0 && gate_depolarization <= 1.0, "gate_depolarization must be in [0,1]");
  require(spam_flip_prob >= 0.0 && spam_flip_prob <= 1.0, "spam_flip_prob must be in [0,1]");
  require(pulse_substeps >= 1, "pulse_substeps must be >= 1");
}

double NoiseConfig::dephasing_rate() const {
  return std::isinf(t2) ? 0.0 : (1.0 - t2_isotropic_fraction) / t2;
}

double NoiseConfig::isotropic_rate() const {
  const double homogeneous = std::isinf(t2) ? 0.0 : t2_isotropic_fraction / t2;
  return homogeneous + (scattering_mode == ScatteringMode::kChannel ? depolarizing_rate : 0.0);
}

AtomInstance sample_atom(const NoiseConfig& config, std::uint64_t master_seed, std::uint64_t atom_index) {
  RandomStream rng(derive_seed(master_seed, StreamTag::kAtom, {atom_index}));
  AtomInstance atom;
  const double z_detuning = rng.normal();
  const double z_amplitude = rng.normal();
  atom.static_detuning = config.static_detuning_sigma * z_detuning;
  atom.amplitude_factor = 1.0 + config.amplitude_inhomogeneity_sigma * z_amplitude;
  return atom;
}

BlochState dephase(const BlochState& state, double dt, double t2) {
  if (std::isinf(t2) || dt == 0.0) return state;
  const double f = std::exp(-dt / t2);
  return BlochState::from_vector({state.x() * f, state.y() * f, state.z()});
}

BlochState depolarize(const BlochState& state, double p) {
  return BlochState::from_vector((1.0 - p) * state.vector());
}

BlochState homogeneous_decay(const BlochState& state, double dt, const NoiseConfig& config) {
  Eigen::Vector3d v = state.vector();
  const double iso = config.isotropic_rate();
  if (iso > 0.0) v *= std::exp(-iso * dt);
  const double deph = config.dephasing_rate();
  if (deph > 0.0) {
    const double f = std::exp(-deph * dt);
    v.x() *= f;
    v.y() *= f;
  }
  return BlochState::from_vector(v);
}

EffectivePulse effective_pulse(const PulseSpec& pulse, int half_pi_units, const AtomInstance& atom,
                               const NoiseConfig& config, RandomStream& rng) {
  EffectivePulse out{pulse, false};
  out.pulse.detuning += config.systematic_detuning + atom.static_detuning;
  out.pulse.duration += half_pi_units * config.duration_offset;
  if (out.pulse.duration < 0.0) {
    out.pulse.duration = 0.0;
    out.duration_clamped = true;
  }
  double scale = atom.amplitude_factor;
  if (config.amplitude_noise_sigma > 0.0) scale *= 1.0 + config.amplitude_noise_sigma * rng.normal();
  out.pulse.rabi_rate *= scale;
  if (out.pulse.rabi_rate < 0.0) out.pulse.rabi_rate = 0.0;
  return out;
}

double scattering_probability(double dt, double rate) { return -std::expm1(-rate * dt); }

BlochState scattering_step(const BlochState& state, double dt, double rate, RandomStream& rng, ScatteringMode mode) {
  if (rate == 0.0 || dt == 0.0) return state;
  if (mode == ScatteringMode::kChannel) {
    return BlochState::from_vector(std::exp(-rate * dt) * state.vector());
  }
  if (rng.uniform() < scattering_probability(dt, rate)) return BlochState::mixed();
  return state;
}

double apply_readout_flip(double p_expected, double flip_prob) {
  return flip_prob + (1.0 - 2.0 * flip_prob) * p_expected;
}

double combine_flips(double a, double b) { return a + b - 2.0 * a * b; }

}  // namespace qrb
