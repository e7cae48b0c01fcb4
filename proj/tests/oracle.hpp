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

// Independent references used by the tests. Everything here works on 2x2
// complex matrices and state vectors, never on the Bloch maps under test.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::Matrix2cd;
using Ket = Eigen::Vector2cd;

inline Mat sx() { return (Mat() << 0, 1, 1, 0).finished(); }
inline Mat sy() { return (Mat() << 0, cd(0, -1), cd(0, 1), 0).finished(); }
inline Mat sz() { return (Mat() << 1, 0, 0, -1).finished(); }

/// H = (W/2)(cos p sx + sin p sy) - (d/2) sz
inline Mat hamiltonian(double rabi, double phase, double detuning) {
  return 0.5 * rabi * (std::cos(phase) * sx() + std::sin(phase) * sy()) - 0.5 * detuning * sz();
}

/// exp(-i H t) by eigendecomposition of the Hermitian H.
inline Mat propagator(double rabi, double phase, double detuning, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian(rabi, phase, detuning));
  Eigen::Vector2cd phases;
  for (int k = 0; k < 2; ++k) phases(k) = std::exp(cd(0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(-i (angle/2)(cos p sx + sin p sy)), closed form.
inline Mat rotation(double phase, double angle) {
  const Mat n = std::cos(phase) * sx() + std::sin(phase) * sy();
  return std::cos(angle / 2) * Mat::Identity() - cd(0, 1) * std::sin(angle / 2) * n;
}

inline Mat rz(double angle) {
  return std::cos(angle / 2) * Mat::Identity() - cd(0, 1) * std::sin(angle / 2) * sz();
}

inline Mat density(const Eigen::Vector3d& b) {
  return 0.5 * (Mat::Identity() + b.x() * sx() + b.y() * sy() + b.z() * sz());
}

inline Eigen::Vector3d bloch(const Mat& rho) {
  return {(rho * sx()).trace().real(), (rho * sy()).trace().real(), (rho * sz()).trace().real()};
}

inline Eigen::Vector3d conjugate(const Mat& u, const Eigen::Vector3d& b) {
  return bloch(u * density(b) * u.adjoint());
}

/// Classical RK4 integration of i d|psi>/dt = H |psi>.
inline Ket integrate(const Ket& psi0, double rabi, double phase, double detuning, double t, int steps) {
  const Mat a = cd(0, -1) * hamiltonian(rabi, phase, detuning);
  const double h = t / steps;
  Ket psi = psi0;
  for (int i = 0; i < steps; ++i) {
    const Ket k1 = a * psi;
    const Ket k2 = a * (psi + 0.5 * h * k1);
    const Ket k3 = a * (psi + 0.5 * h * k2);
    const Ket k4 = a * (psi + h * k3);
    psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

/// Columns of the integrated propagator, from the basis states.
inline Mat integrated_propagator(double rabi, double phase, double detuning, double t, int steps) {
  Mat u;
  u.col(0) = integrate(Ket(1, 0), rabi, phase, detuning, t, steps);
  u.col(1) = integrate(Ket(0, 1), rabi, phase, detuning, t, steps);
  return u;
}

}  // namespace oracle
