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
#include <optional>
#include <span>
#include <vector>

#include "qrb/random.hpp"
#include "qrb/spin_core.hpp"

namespace qrb {

enum class Pauli : std::uint8_t { kI, kX, kY, kZ };
enum class CgAxis : std::uint8_t { kX, kY };

/// Pauli randomization: a signed pi rotation about a Pauli axis, or identity.
struct PrOp {
  Pauli pauli = Pauli::kI;
  int sign = +1;
  bool operator==(const PrOp&) const = default;
};

/// Computational gate: a signed pi/2 rotation about x or y.
struct CgOp {
  CgAxis axis = CgAxis::kX;
  int sign = +1;
  bool operator==(const CgOp&) const = default;
};

/// The recovery pi/2 pulse. No axis means the pre-recovery state already sits
/// on a pole; the slot then carries no drive.
struct RecoveryPulse {
  std::optional<CgAxis> axis;
  int sign = +1;
  bool operator==(const RecoveryPulse&) const = default;
};

struct RecoveryBlock {
  PrOp pre_pr;
  RecoveryPulse pulse;
  PrOp post_pr;
  int expected_outcome = 0;  ///< 0 -> |0> (bz = +1), 1 -> |1>
};

struct TimingConfig {
  double t_half_pi = 31.05e-6;
  double t_pi = 62.1e-6;
  double hold_time = 0.0;  ///< idle inserted between consecutive slots
  double prep_pulse = 62.1e-6;
  double readout_pulse = 62.1e-6;

  double rabi_rate() const;
  /// Throws std::invalid_argument on nonpositive pulse times, negative hold
  /// time, or t_pi != 2 t_half_pi (relative 1e-9).
  void validate() const;
};

std::vector<int> default_truncations();

struct RbJob {
  std::size_t cg_id = 0;
  std::size_t pr_id = 0;
  int truncation = 0;
};

struct RbSequenceSet {
  std::vector<std::vector<CgOp>> cg_streams;
  std::vector<std::vector<PrOp>> pr_streams;
  std::vector<int> truncations;
  std::uint64_t master_seed = 0;

  /// cg-major, then pr, then truncation.
  std::vector<RbJob> jobs() const;
};

PrOp sample_pr(RandomStream& rng);
CgOp sample_cg(RandomStream& rng);

/// Throws std::invalid_argument on zero stream counts or empty, non-positive
/// or non-ascending truncations.
RbSequenceSet build_sequence_set(std::size_t n_cg, std::size_t n_pr, std::vector<int> truncations,
                                 std::uint64_t master_seed);

/// Ideal (error-free) action of single operations.
AffineBlochMap ideal_map(const PrOp& op);
AffineBlochMap ideal_map(const CgOp& op);

/// |0> after the first l (PR, CG) pairs, each PR applied before its CG.
BlochState ideal_trace(std::span<const CgOp> cg_stream, std::span<const PrOp> pr_stream, int l);

/// Signed coordinate axis that `state` is within `tol` of, as 0..5 meaning
/// +x, -x, +y, -y, +z, -z. Empty if `state` is not a Pauli eigenstate.
std::optional<int> pauli_eigenstate_index(const BlochState& state, double tol = 1e-6);

/// Recovery with explicit PR choices and pulse sign. The pulse axis is solved
/// so the ideal final state is a z eigenstate. Throws std::invalid_argument
/// if `ideal_pre` is not a Pauli eigenstate.
RecoveryBlock compute_recovery(const BlochState& ideal_pre, const PrOp& pre_pr, int sign, const PrOp& post_pr);

/// Draws pre PR, then the pulse sign, then post PR.
RecoveryBlock compute_recovery(const BlochState& ideal_pre, RandomStream& rng);

enum class SlotKind : std::uint8_t { kPulse, kIdle, kZRotation };
enum class SlotRole : std::uint8_t { kPauli, kComputational, kRecovery };

struct Slot {
  SlotKind kind = SlotKind::kIdle;
  SlotRole role = SlotRole::kPauli;
  double phase = 0.0;  ///< rad, in [0, 2 pi); frame already applied
  double angle = 0.0;  ///< nominal rotation angle, rad
  double duration = 0.0;

  /// Pulse-duration errors are specified per pi/2; pi slots get twice that.
  int half_pi_units() const { return role == SlotRole::kPauli ? 2 : 1; }
  bool operator==(const Slot&) const = default;
};

struct CompiledSchedule {
  std::vector<Slot> slots;
  double gap = 0.0;  ///< hold time between consecutive slots
  double total_duration = 0.0;
  int expected_outcome = 0;
};

/// Virtual frame tracking (Z PRs become idles plus a pi frame shift) or
/// explicit z rotations; the two are equivalent on z populations.
enum class FrameMode { kVirtual, kPhysical };

CompiledSchedule compile(std::span<const CgOp> cg_stream, std::span<const PrOp> pr_stream, int l,
                         const RecoveryBlock& recovery, const TimingConfig& timing,
                         FrameMode mode = FrameMode::kVirtual);

/// Builds the recovery for (cg_id, pr_id, l) from its own derived stream and
/// compiles the job.
CompiledSchedule compile_job(const RbSequenceSet& set, const RbJob& job, const TimingConfig& timing,
                             FrameMode mode = FrameMode::kVirtual);

double nominal_phase(CgAxis axis);

}  // namespace qrb
