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

#include "qrb/spin_core.hpp"

#include <cmath>
#include <stdexcept>

namespace qrb {

BlochState::BlochState(double x, double y, double z) : v_(x, y, z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || v_.squaredNorm() > 1.0 + 1e-12) {
    throw std::invalid_argument("Bloch vector outside the unit ball");
  }
}

void PulseSpec::validate() const {
  if (!(rabi_rate >= 0.0)) {
    throw std::invalid_argument("pulse rabi_rate must be >= 0");
  }
  if (!(duration >= 0.0)) {
    throw std::invalid_argument("pulse duration must be >= 0");
  }
}

AffineBlochMap operator*(const AffineBlochMap& outer, const AffineBlochMap& inner) {
  AffineBlochMap out;
  out.linear = outer.linear * inner.linear;
  out.offset = outer.linear * inner.offset + outer.offset;
  return out;
}

namespace {

// Rodrigues formula for a unit axis n.
Eigen::Matrix3d axis_angle(const Eigen::Vector3d& n, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  Eigen::Matrix3d r;
  r << c + t * n.x() * n.x(), t * n.x() * n.y() - s * n.z(), t * n.x() * n.z() + s * n.y(),
      t * n.y() * n.x() + s * n.z(), c + t * n.y() * n.y(), t * n.y() * n.z() - s * n.x(),
      t * n.z() * n.x() - s * n.y(), t * n.z() * n.y() + s * n.x(), c + t * n.z() * n.z();
  return r;
}

}  // namespace

AffineBlochMap rotation_map(double phase, double angle) {
  AffineBlochMap m;
  m.linear = axis_angle({std::cos(phase), std::sin(phase), 0.0}, angle);
  return m;
}

AffineBlochMap z_rotation_map(double angle) {
  AffineBlochMap m;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m.linear << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return m;
}

AffineBlochMap detuned_rotation_map(const PulseSpec& pulse) {
  const double omega = pulse.rabi_rate;
  const double delta = pulse.detuning;
  if (delta == 0.0) {
    return rotation_map(pulse.phase, omega * pulse.duration);
  }
  if (omega == 0.0) {
    return z_rotation_map(-delta * pulse.duration);
  }
  const double generalized = std::hypot(omega, delta);
  const Eigen::Vector3d axis(omega * std::cos(pulse.phase) / generalized,
                             omega * std::sin(pulse.phase) / generalized, -delta / generalized);
  AffineBlochMap m;
  m.linear = axis_angle(axis, generalized * pulse.duration);
  return m;
}

BlochState apply(const AffineBlochMap& map, const BlochState& state) {
  return BlochState::from_vector(map.linear * state.vector() + map.offset);
}

Populations z_populations(const BlochState& state) {
  return {0.5 * (1.0 + state.z()), 0.5 * (1.0 - state.z())};
}

double state_fidelity(const BlochState& state, const BlochState& ideal) {
  if (std::abs(ideal.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("state_fidelity: ideal state must be pure");
  }
  return 0.5 * (1.0 + state.vector().dot(ideal.vector()));
}

}  // namespace qrb
