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

#include <iosfwd>
#include <string>

#include "qrb/rb_sequences.hpp"

namespace qrb {

// Line-oriented schedule format, version 1:
//
//   # qrb-schedule v1
//   expected_outcome <0|1>
//   gap_s <seconds>
//   slots <count>
//   <kind> <phase_rad> <angle_rad> <duration_s> <role>
//   ...
//
// kind is pulse | idle | zrot, role is pr | cg | rec. Numbers are written in
// shortest round-trip decimal form, so reading back is exact.

void write_schedule(std::ostream& out, const CompiledSchedule& schedule);
std::string format_schedule(const CompiledSchedule& schedule);

/// Throws std::runtime_error with the offending line number on malformed input.
CompiledSchedule read_schedule(std::istream& in);

}  // namespace qrb
