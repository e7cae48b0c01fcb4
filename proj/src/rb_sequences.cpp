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

#include "qrb/rb_sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrb {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phase) {
  double p = std::fmod(phase, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  return p;
}

double sign_phase(int sign) { return sign < 0 ? kPi : 0.0; }

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("gate sign must be +1 or -1");
}

}  // namespace

double TimingConfig::rabi_rate() const { return 0.5 * kPi / t_half_pi; }

void TimingConfig::validate() const {
  if (!(t_half_pi > 0.0) || !(t_pi > 0.0)) throw std::invalid_argument("pulse times must be > 0");
  if (std::abs(t_pi - 2.0 * t_half_pi) > 1e-9 * t_pi) {
    throw std::invalid_argument("t_pi must equal 2 * t_half_pi");
  }
  if (!(hold_time >= 0.0)) throw std::invalid_argument("hold time must be >= 0");
  if (!(prep_pulse > 0.0) || !(readout_pulse > 0.0)) {
    throw std::invalid_argument("prep/readout pulse durations must be > 0");
  }
}

std::vector<int> default_truncations() {
  return {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 145, 235, 380, 615, 995};
}

std::vector<RbJob> RbSequenceSet::jobs() const {
  std::vector<RbJob> out;
  out.reserve(cg_streams.size() * pr_streams.size() * truncations.size());
  for (std::size_t c = 0; c < cg_streams.size(); ++c) {
    for (std::size_t p = 0; p < pr_streams.size(); ++p) {
      for (int l : truncations) out.push_back({c, p, l});
    }
  }
  return out;
}

PrOp sample_pr(RandomStream& rng) {
  const auto v = rng() >> 61;  // 0..7
  return {static_cast<Pauli>(v >> 1), (v & 1U) ? -1 : +1};
}

CgOp sample_cg(RandomStream& rng) {
  const auto v = rng() >> 62;  // 0..3
  return {static_cast<CgAxis>(v >> 1), (v & 1U) ? -1 : +1};
}

RbSequenceSet build_sequence_set(std::size_t n_cg, std::size_t n_pr, std::vector<int> truncations,
                                 std::uint64_t master_seed) {
  if (n_cg == 0 || n_pr == 0) throw std::invalid_argument("need at least one CG and one PR stream");
  if (truncations.empty()) throw std::invalid_argument("truncation list is empty");
  if (truncations.front() < 1) throw std::invalid_argument("truncations must be positive");
  if (std::adjacent_find(truncations.begin(), truncations.end(), std::greater_equal<>()) != truncations.end()) {
    throw std::invalid_argument("truncations must be strictly ascending");
  }
  const auto length = static_cast<std::size_t>(truncations.back());

  RbSequenceSet set;
  set.master_seed = master_seed;
  set.truncations = std::move(truncations);
  set.cg_streams.resize(n_cg);
  for (std::size_t i = 0; i < n_cg; ++i) {
    RandomStream rng(derive_seed(master_seed, StreamTag::kCgSequence, {i}));
    set.cg_streams[i].reserve(length);
    for (std::size_t k = 0; k < length; ++k) set.cg_streams[i].push_back(sample_cg(rng));
  }
  set.pr_streams.resize(n_pr);
  for (std::size_t i = 0; i < n_pr; ++i) {
    RandomStream rng(derive_seed(master_seed, StreamTag::kPrSequence, {i}));
    set.pr_streams[i].reserve(length);
    for (std::size_t k = 0; k < length; ++k) set.pr_streams[i].push_back(sample_pr(rng));
  }
  return set;
}

double nominal_phase(CgAxis axis) { return axis == CgAxis::kX ? 0.0 : 0.5 * kPi; }

AffineBlochMap ideal_map(const PrOp& op) {
  switch (op.pauli) {
    case Pauli::kI:
      return AffineBlochMap::identity();
    case Pauli::kX:
      return rotation_map(sign_phase(op.sign), kPi);
    case Pauli::kY:
      return rotation_map(0.5 * kPi + sign_phase(op.sign), kPi);
    case Pauli::kZ:
      return z_rotation_map(op.sign * kPi);
  }
  return AffineBlochMap::identity();
}

AffineBlochMap ideal_map(const CgOp& op) {
  return rotation_map(nominal_phase(op.axis) + sign_phase(op.sign), 0.5 * kPi);
}

BlochState ideal_trace(std::span<const CgOp> cg_stream, std::span<const PrOp> pr_stream, int l) {
  if (l < 0 || static_cast<std::size_t>(l) > cg_stream.size() || static_cast<std::size_t>(l) > pr_stream.size()) {
    throw std::invalid_argument("ideal_trace: truncation exceeds stream length");
  }
  BlochState b = BlochState::ground();
  for (int k = 0; k < l; ++k) {
    b = apply(ideal_map(pr_stream[k]), b);
    b = apply(ideal_map(cg_stream[k]), b);
  }
  return b;
}

std::optional<int> pauli_eigenstate_index(const BlochState& state, double tol) {
  const Eigen::Vector3d& v = state.vector();
  for (int axis = 0; axis < 3; ++axis) {
    for (int s = 0; s < 2; ++s) {
      Eigen::Vector3d target = Eigen::Vector3d::Zero();
      target[axis] = s == 0 ? 1.0 : -1.0;
      if ((v - target).norm() <= tol) return 2 * axis + s;
    }
  }
  return std::nullopt;
}

namespace {

BlochState snap(int index) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  v[index / 2] = (index % 2 == 0) ? 1.0 : -1.0;
  return BlochState::from_vector(v);
}

}  // namespace

RecoveryBlock compute_recovery(const BlochState& ideal_pre, const PrOp& pre_pr, int sign, const PrOp& post_pr) {
  check_sign(sign);
  check_sign(pre_pr.sign);
  check_sign(post_pr.sign);
  const auto index = pauli_eigenstate_index(ideal_pre);
  if (!index) throw std::invalid_argument("compute_recovery: state is not a Pauli eigenstate");

  RecoveryBlock block;
  block.pre_pr = pre_pr;
  block.post_pr = post_pr;
  block.pulse.sign = sign;

  auto mid_index = pauli_eigenstate_index(apply(ideal_map(pre_pr), snap(*index)));
  BlochState mid = snap(*mid_index);
  if (*mid_index / 2 == 0) {
    block.pulse.axis = CgAxis::kY;  // +-x: rotate about y onto a pole
  } else if (*mid_index / 2 == 1) {
    block.pulse.axis = CgAxis::kX;
  }
  if (block.pulse.axis) {
    mid = apply(ideal_map(CgOp{*block.pulse.axis, sign}), mid);
  }
  const BlochState final_state = apply(ideal_map(post_pr), mid);
  block.expected_outcome = final_state.z() > 0.0 ? 0 : 1;
  return block;
}

RecoveryBlock compute_recovery(const BlochState& ideal_pre, RandomStream& rng) {
  const PrOp pre = sample_pr(rng);
  const int sign = rng.coin() ? -1 : +1;
  const PrOp post = sample_pr(rng);
  return compute_recovery(ideal_pre, pre, sign, post);
}

namespace {

class ScheduleBuilder {
 public:
  ScheduleBuilder(const TimingConfig& timing, FrameMode mode) : timing_(timing), mode_(mode) {}

  void pauli(const PrOp& op) {
    switch (op.pauli) {
      case Pauli::kI:
        push({SlotKind::kIdle, SlotRole::kPauli, 0.0, 0.0, timing_.t_pi});
        break;
      case Pauli::kX:
      case Pauli::kY: {
        const double axis_phase = op.pauli == Pauli::kX ? 0.0 : 0.5 * kPi;
        push({SlotKind::kPulse, SlotRole::kPauli, wrap_phase(axis_phase + sign_phase(op.sign) + frame_), kPi,
              timing_.t_pi});
        break;
      }
      case Pauli::kZ:
        if (mode_ == FrameMode::kVirtual) {
          // Both signs shift the frame by pi (identical mod 2 pi).
          frame_ = wrap_phase(frame_ + kPi);
          push({SlotKind::kIdle, SlotRole::kPauli, 0.0, 0.0, timing_.t_pi});
        } else {
          push({SlotKind::kZRotation, SlotRole::kPauli, 0.0, op.sign * kPi, timing_.t_pi});
        }
        break;
    }
  }

  void half_pi(CgAxis axis, int sign, SlotRole role) {
    push({SlotKind::kPulse, role, wrap_phase(nominal_phase(axis) + sign_phase(sign) + frame_), 0.5 * kPi,
          timing_.t_half_pi});
  }

  void frame_only(SlotRole role) { push({SlotKind::kIdle, role, 0.0, 0.0, timing_.t_half_pi}); }

  CompiledSchedule finish(int expected_outcome) {
    CompiledSchedule out;
    out.slots = std::move(slots_);
    out.gap = timing_.hold_time;
    out.total_duration = busy_;
    if (!out.slots.empty()) out.total_duration += static_cast<double>(out.slots.size() - 1) * out.gap;
    out.expected_outcome = expected_outcome;
    return out;
  }

 private:
  void push(const Slot& slot) {
    slots_.push_back(slot);
    busy_ += slot.duration;
  }

  const TimingConfig& timing_;
  FrameMode mode_;
  double frame_ = 0.0;
  double busy_ = 0.0;
  std::vector<Slot> slots_;
};

}  // namespace

CompiledSchedule compile(std::span<const CgOp> cg_stream, std::span<const PrOp> pr_stream, int l,
                         const RecoveryBlock& recovery, const TimingConfig& timing, FrameMode mode) {
  if (l < 0 || static_cast<std::size_t>(l) > cg_stream.size() || static_cast<std::size_t>(l) > pr_stream.size()) {
    throw std::invalid_argument("compile: truncation exceeds stream length");
  }
  ScheduleBuilder builder(timing, mode);
  for (int k = 0; k < l; ++k) {
    builder.pauli(pr_stream[k]);
    builder.half_pi(cg_stream[k].axis, cg_stream[k].sign, SlotRole::kComputational);
  }
  builder.pauli(recovery.pre_pr);
  if (recovery.pulse.axis) {
    builder.half_pi(*recovery.pulse.axis, recovery.pulse.sign, SlotRole::kRecovery);
  } else {
    builder.frame_only(SlotRole::kRecovery);
  }
  builder.pauli(recovery.post_pr);
  return builder.finish(recovery.expected_outcome);
}

CompiledSchedule compile_job(const RbSequenceSet& set, const RbJob& job, const TimingConfig& timing,
                             FrameMode mode) {
  const auto& cg = set.cg_streams.at(job.cg_id);
  const auto& pr = set.pr_streams.at(job.pr_id);
  RandomStream rng(derive_seed(set.master_seed, StreamTag::kRecovery,
                               {job.cg_id, job.pr_id, static_cast<std::uint64_t>(job.truncation)}));
  const BlochState pre = ideal_trace(cg, pr, job.truncation);
  return compile(cg, pr, job.truncation, compute_recovery(pre, rng), timing, mode);
}

}  // namespace qrb
