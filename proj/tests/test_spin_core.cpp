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

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qrb/spin_core.hpp"

namespace qrb {
namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec(const Eigen::Vector3d& got, const Eigen::Vector3d& want, double tol) {
  EXPECT_NEAR((got - want).norm(), 0.0, tol) << "got " << got.transpose() << " want " << want.transpose();
}

double orthogonality_error(const AffineBlochMap& m) {
  return (m.linear.transpose() * m.linear - Eigen::Matrix3d::Identity()).norm();
}

TEST(BlochState, RejectsOutsideBall) {
  EXPECT_THROW(BlochState(1.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(BlochState(std::nan(""), 0.0, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(BlochState(0.0, 0.0, 1.0 + 1e-13));
  EXPECT_DOUBLE_EQ(BlochState::mixed().norm(), 0.0);
}

TEST(RotationMap, PiAboutXFlipsZ) {
  expect_vec(apply(rotation_map(0.0, kPi), BlochState::ground()).vector(), {0, 0, -1}, 1e-15);
}

TEST(RotationMap, ZeroAngleIsIdentity) {
  for (double phi : {0.0, 0.3, 2.0, 5.5}) {
    EXPECT_NEAR((rotation_map(phi, 0.0).linear - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-15);
  }
}

TEST(RotationMap, HalfPiAboutXMatchesUnitary) {
  const Eigen::Vector3d want = oracle::conjugate(oracle::rotation(0.0, kPi / 2), {0, 0, 1});
  expect_vec(want, {0, -1, 0}, 1e-15);
  expect_vec(apply(rotation_map(0.0, kPi / 2), BlochState::ground()).vector(), want, 1e-15);
}

TEST(RotationMap, SignOfPiRotationInvisible) {
  for (double phi : {0.0, 0.7, kPi / 2, 4.0}) {
    EXPECT_NEAR((rotation_map(phi, kPi).linear - rotation_map(phi + kPi, kPi).linear).norm(), 0.0, 1e-15);
  }
}

TEST(DetunedRotation, ReducesToResonantRotation) {
  const double omega = (kPi / 2) / 31.05e-6;
  for (double phi : {0.0, 1.0, 3.0}) {
    const AffineBlochMap a = detuned_rotation_map({omega, phi, 31.05e-6, 0.0});
    EXPECT_NEAR((a.linear - rotation_map(phi, kPi / 2).linear).norm(), 0.0, 1e-12);
  }
}

TEST(DetunedRotation, NoDriveIsFreePrecession) {
  const double delta = 2 * kPi * 150.0, t = 1e-3;
  const AffineBlochMap a = detuned_rotation_map({0.0, 0.0, t, delta});
  EXPECT_NEAR((a.linear - z_rotation_map(-delta * t).linear).norm(), 0.0, 1e-12);
}

TEST(DetunedRotation, MatchesIntegratedSchrodinger) {
  const double omega = 2 * kPi * 8.051e3, delta = 2 * kPi * 150.0, t = 31.05e-6;
  const oracle::Mat u = oracle::integrated_propagator(omega, 0.0, delta, t, 2000);
  const AffineBlochMap m = detuned_rotation_map({omega, 0.0, t, delta});
  for (const Eigen::Vector3d& b : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}) {
    expect_vec(m.linear * b, oracle::conjugate(u, b), 1e-9);
  }
}

TEST(DetunedRotation, RandomDrawsMatchIntegrationAndAreOrthogonal) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> rabi(0.0, 2 * kPi * 2e4), det(-2 * kPi * 5e3, 2 * kPi * 5e3),
      phase(0.0, 2 * kPi), time(0.0, 2e-4);
  for (int i = 0; i < 100; ++i) {
    const PulseSpec p{rabi(gen), phase(gen), time(gen), det(gen)};
    const AffineBlochMap m = detuned_rotation_map(p);
    EXPECT_LT(orthogonality_error(m), 1e-12);
    EXPECT_NEAR(m.linear.determinant(), 1.0, 1e-12);
    EXPECT_EQ(m.offset, Eigen::Vector3d::Zero());
    const oracle::Mat u = oracle::integrated_propagator(p.rabi_rate, p.phase, p.detuning, p.duration, 4000);
    for (const Eigen::Vector3d& b : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)}) {
      expect_vec(m.linear * b, oracle::conjugate(u, b), 1e-9);
    }
  }
}

TEST(Apply, TwoHalfPiPulsesInvert) {
  const AffineBlochMap h = rotation_map(0.0, kPi / 2);
  const oracle::Mat u = oracle::rotation(0.0, kPi / 2);
  const Eigen::Vector3d want = oracle::conjugate(u * u, {0, 0, 1});
  expect_vec(apply(h, apply(h, BlochState::ground())).vector(), want, 1e-15);
  expect_vec(want, {0, 0, -1}, 1e-15);
}

TEST(Apply, CompositionMatchesUnitaryProduct) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    const double p1 = angle(gen), a1 = angle(gen), p2 = angle(gen), a2 = angle(gen);
    const AffineBlochMap m = rotation_map(p2, a2) * rotation_map(p1, a1);
    const oracle::Mat u = oracle::rotation(p2, a2) * oracle::rotation(p1, a1);
    const Eigen::Vector3d b(0.3, -0.5, 0.6);
    expect_vec(apply(m, BlochState::from_vector(b)).vector(), oracle::conjugate(u, b), 1e-10);
    expect_vec(apply(rotation_map(p2, a2), apply(rotation_map(p1, a1), BlochState::from_vector(b))).vector(),
               apply(m, BlochState::from_vector(b)).vector(), 1e-12);
  }
}

TEST(Apply, IdentityLeavesState) {
  const BlochState b(0.1, 0.2, -0.3);
  EXPECT_EQ(apply(AffineBlochMap::identity(), b).vector(), b.vector());
}

TEST(Populations, Examples) {
  EXPECT_DOUBLE_EQ(z_populations(BlochState::ground()).p0, 1.0);
  EXPECT_DOUBLE_EQ(z_populations(BlochState::ground()).p1, 0.0);
  EXPECT_DOUBLE_EQ(z_populations(BlochState::mixed()).p0, 0.5);
  const Populations eq = z_populations(BlochState(1.0, 0.0, 0.0));
  EXPECT_DOUBLE_EQ(eq.p0, 0.5);
  EXPECT_DOUBLE_EQ(eq.p0 + eq.p1, 1.0);
}

TEST(StateFidelity, Examples) {
  const BlochState ideal(0.0, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(state_fidelity(ideal, ideal), 1.0);
  EXPECT_DOUBLE_EQ(state_fidelity(BlochState(0.0, -1.0, 0.0), ideal), 0.0);
  EXPECT_DOUBLE_EQ(state_fidelity(BlochState::mixed(), ideal), 0.5);
  EXPECT_THROW(state_fidelity(ideal, BlochState(0.5, 0.0, 0.0)), std::invalid_argument);
}

TEST(StateFidelity, EqualsTraceOverlap) {
  const Eigen::Vector3d b(0.2, -0.4, 0.5), ideal = Eigen::Vector3d(1, 2, -2).normalized();
  const double want = (oracle::density(ideal) * oracle::density(b)).trace().real();
  EXPECT_NEAR(state_fidelity(BlochState::from_vector(b), BlochState::from_vector(ideal)), want, 1e-15);
}

}  // namespace
}  // namespace qrb
