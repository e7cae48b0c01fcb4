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
#include <string>
#include <vector>

#include "json.hpp"

namespace qrb {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t ensemble = 200;
  std::size_t ramsey_ensemble = 2000;
  int workers = 0;
};

/// One simulated quantity compared with its reference value.
struct SuiteRow {
  std::string id;
  std::string quantity;
  std::string unit;
  double simulated = 0.0;
  double uncertainty = 0.0;
  double reference = 0.0;  ///< published value; NaN when there is none
  double lower = 0.0;      ///< acceptance band
  double upper = 0.0;
  bool pass = false;
  std::string note;
};

std::vector<SuiteRow> depolarization_rows(const SuiteOptions& options);
std::vector<SuiteRow> t2_limited_rows(const SuiteOptions& options);
std::vector<SuiteRow> spam_rows(const SuiteOptions& options);
std::vector<SuiteRow> detuning_sweep_rows(const SuiteOptions& options);
std::vector<SuiteRow> duration_sweep_rows(const SuiteOptions& options);
std::vector<SuiteRow> ramsey_rows(const SuiteOptions& options);
std::vector<SuiteRow> echo_rows(const SuiteOptions& options);
std::vector<SuiteRow> hold_time_rows(const SuiteOptions& options);
std::vector<SuiteRow> refocus_rows(const SuiteOptions& options);
std::vector<SuiteRow> scattering_rows(const SuiteOptions& options);
std::vector<SuiteRow> paper_defaults_rows(const SuiteOptions& options);

/// All of the above, in that order.
std::vector<SuiteRow> run_paper_suite(const SuiteOptions& options);

std::string format_suite_table(const std::vector<SuiteRow>& rows);
nlohmann::ordered_json suite_to_json(const std::vector<SuiteRow>& rows);

}  // namespace qrb
