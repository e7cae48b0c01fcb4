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

#include <Eigen/Core>

namespace qrb {

/// Single-qubit state as a Bloch vector. bz = +1 is |0>, bz = -1 is |1>,
/// the origin is the fully mixed state.
class BlochState {
 public:
  BlochState() = default;
  /// Throws std::invalid_argument if |b|^2 > 1 + 1e-12.
  BlochState(double x, double y, double z);

  static BlochState ground() { return from_vector({0.0, 0.0, 1.0}); }
  static BlochState excited() { return from_vector({0.0, 0.0, -1.0}); }
  static BlochState mixed() { return {}; }

  /// Unchecked; used by the channels, which are contractive.
  static BlochState from_vector(const Eigen::Vector3d& v) {
    BlochState s;
    s.v_ = v;
    return s;
  }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double norm() const { return v_.norm(); }
  const Eigen::Vector3d& vector() const { return v_; }

 private:
  Eigen::Vector3d v_ = Eigen::Vector3d::Zero();
};

/// Square microwave pulse in the frame of the drive.
struct PulseSpec {
  double rabi_rate = 0.0;  ///< rad/s
  double phase = 0.0;      ///< rad, equatorial drive axis angle
  double duration = 0.0;   ///< s
  double detuning = 0.0;   ///< rad/s, drive minus qubit

  /// Throws std::invalid_argument on negative rate or duration.
  void validate() const;
};

/// b -> linear * b + offset. Every map this library builds is unital
/// (offset zero) and contractive.
struct AffineBlochMap {
  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  static AffineBlochMap identity() { return {}; }
};

/// Composition: (outer * inner)(b) = outer(inner(b)).
AffineBlochMap operator*(const AffineBlochMap& outer, const AffineBlochMap& inner);

// Sign convention, used everywhere:
//   H = (Omega/2)(cos(phi) sx + sin(phi) sy) - (delta/2) sz,  U = exp(-i H t)
// which on the Bloch sphere is a right-handed rotation about
// (Omega cos(phi), Omega sin(phi), -delta) by sqrt(Omega^2 + delta^2) t.

/// Resonant rotation by `angle` about the equatorial axis (cos phase, sin phase, 0).
AffineBlochMap rotation_map(double phase, double angle);

/// Right-handed rotation by `angle` about +z.
AffineBlochMap z_rotation_map(double angle);

/// Generalized Rabi rotation for a (possibly detuned) square pulse.
AffineBlochMap detuned_rotation_map(const PulseSpec& pulse);

BlochState apply(const AffineBlochMap& map, const BlochState& state);

struct Populations {
  double p0 = 0.0;
  double p1 = 0.0;
};

Populations z_populations(const BlochState& state);

/// tr(rho_ideal rho) = (1 + b . b_ideal) / 2. Throws std::invalid_argument
/// unless |ideal| = 1 within 1e-9.
double state_fidelity(const BlochState& state, const BlochState& ideal);

}  // namespace qrb
