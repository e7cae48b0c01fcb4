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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qrb/experiments.hpp"

namespace qrb {

/// Everything a command needs: the experiment settings and the scan grids.
struct RunConfig {
  ExperimentConfig experiment;
  ScanPlans scans = default_scan_plans();
};

/// Invalid configuration; the message carries source and line when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "noiseless": ideal gates. "paper_defaults": T2 = 0.28 s, T2* = 25 ms,
/// scattering 0.2 /s, 0.9 % readout flips.
std::vector<std::string> preset_names();
RunConfig preset(std::string_view name);

/// Parses a JSON run configuration. A top-level "preset" key selects the base
/// (default "noiseless"); every other key overrides it. A sidecar written by
/// the CLI is accepted as well (its "config" member is used). Unknown keys
/// and type errors throw ConfigError.
RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");

/// Reads a file, or a preset when `path_or_preset` names one and no such file exists.
RunConfig load_run_config(const std::string& path_or_preset);

/// Complete, preset-free echo that parses back to an identical RunConfig.
nlohmann::ordered_json to_json(const RunConfig& config);

/// `git describe` of the build.
std::string_view code_version();

/// FNV-1a 64 of the compact echo, as 16 hex digits.
std::string config_fingerprint(const RunConfig& config);

}  // namespace qrb
