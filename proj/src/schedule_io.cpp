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

#include "qrb/schedule_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qrb {

namespace {

const char* kind_name(SlotKind kind) {
  switch (kind) {
    case SlotKind::kPulse:
      return "pulse";
    case SlotKind::kIdle:
      return "idle";
    case SlotKind::kZRotation:
      return "zrot";
  }
  return "?";
}

const char* role_name(SlotRole role) {
  switch (role) {
    case SlotRole::kPauli:
      return "pr";
    case SlotRole::kComputational:
      return "cg";
    case SlotRole::kRecovery:
      return "rec";
  }
  return "?";
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error(fmt::format("schedule line {}: {}", line, what));
}

}  // namespace

void write_schedule(std::ostream& out, const CompiledSchedule& schedule) {
  out << format_schedule(schedule);
}

std::string format_schedule(const CompiledSchedule& schedule) {
  std::string s = "# qrb-schedule v1\n";
  s += fmt::format("expected_outcome {}\ngap_s {}\nslots {}\n", schedule.expected_outcome, schedule.gap,
                   schedule.slots.size());
  for (const Slot& slot : schedule.slots) {
    s += fmt::format("{} {} {} {} {}\n", kind_name(slot.kind), slot.phase, slot.angle, slot.duration,
                     role_name(slot.role));
  }
  return s;
}

CompiledSchedule read_schedule(std::istream& in) {
  CompiledSchedule schedule;
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.front() != '#') return line;
    }
    fail(line_no + 1, "unexpected end of input");
  };
  auto header = [&](const char* key) -> std::string {
    std::istringstream ls(next_line());
    std::string name, value;
    if (!(ls >> name >> value) || name != key) fail(line_no, fmt::format("expected '{} <value>'", key));
    return value;
  };

  try {
    schedule.expected_outcome = std::stoi(header("expected_outcome"));
    schedule.gap = std::stod(header("gap_s"));
    const auto count = std::stoull(header("slots"));
    if (schedule.expected_outcome != 0 && schedule.expected_outcome != 1) fail(line_no, "outcome must be 0 or 1");
    double busy = 0.0;
    for (unsigned long long i = 0; i < count; ++i) {
      std::istringstream ls(next_line());
      std::string kind, role;
      Slot slot;
      if (!(ls >> kind >> slot.phase >> slot.angle >> slot.duration >> role)) fail(line_no, "malformed slot");
      if (kind == "pulse") {
        slot.kind = SlotKind::kPulse;
      } else if (kind == "idle") {
        slot.kind = SlotKind::kIdle;
      } else if (kind == "zrot") {
        slot.kind = SlotKind::kZRotation;
      } else {
        fail(line_no, "unknown slot kind '" + kind + "'");
      }
      if (role == "pr") {
        slot.role = SlotRole::kPauli;
      } else if (role == "cg") {
        slot.role = SlotRole::kComputational;
      } else if (role == "rec") {
        slot.role = SlotRole::kRecovery;
      } else {
        fail(line_no, "unknown slot role '" + role + "'");
      }
      busy += slot.duration;
      schedule.slots.push_back(slot);
    }
    schedule.total_duration = busy;
    if (!schedule.slots.empty()) {
      schedule.total_duration += static_cast<double>(schedule.slots.size() - 1) * schedule.gap;
    }
  } catch (const std::logic_error& e) {  // stoi/stod failures
    fail(line_no, e.what());
  }
  return schedule;
}

}  // namespace qrb
