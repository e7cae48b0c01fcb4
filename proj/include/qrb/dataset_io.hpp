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
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qrb/analysis.hpp"
#include "qrb/bootstrap.hpp"
#include "qrb/experiments.hpp"
#include "qrb/run_config.hpp"

namespace qrb {

// Column sets. These are part of the file-format contract.
inline const std::vector<std::string> kRbResultsColumns{"cg_id", "pr_id", "truncation", "fidelity", "std_error"};
inline const std::vector<std::string> kRbAverageColumns{"truncation", "fidelity", "std_error"};
inline const std::vector<std::string> kPlotColumns{"x", "y", "yerr"};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Malformed CSV; the message names the row (1-based, header = row 1) and column.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF. Requires a
/// header and rectangular rows.
CsvTable read_csv(std::istream& in, std::string_view source = "<csv>");
CsvTable read_csv_file(const std::string& path);

/// Quotes a field only when it needs it.
std::string csv_field(std::string_view text);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double value);

void write_rb_results(std::ostream& out, const RbDataset& data);
void write_decay_points(std::ostream& out, std::span<const DecayPoint> points);
void write_scan(std::ostream& out, const ScanDataset& data, std::string_view x_column, std::string_view y_column,
                double x_scale = 1.0);
void write_plot(std::ostream& out, std::span<const DataPoint> points);

/// Accepts rb_results (averaged over sequences here) or rb_average columns.
std::vector<DecayPoint> read_rb_points(const CsvTable& table);

/// First column x, second y, optional third the y uncertainty.
std::vector<DataPoint> read_xy_points(const CsvTable& table);

/// {model, params, param_errors, covariance, chi2, dof, n_points, ...}
nlohmann::ordered_json fit_to_json(const DecayFit& fit);

/// Parameter keys get "_<unit>" appended where `units` names one.
nlohmann::ordered_json fit_to_json(const SweepFit& fit, const std::map<std::string, std::string>& units = {});

nlohmann::ordered_json bootstrap_to_json(const RbBootstrap& boot);

/// Metadata written next to every dataset. Loading it with
/// parse_run_config reproduces the run.
nlohmann::ordered_json sidecar(std::string_view command, const RunConfig& config, std::string_view code_version);

/// Writes `text` to `path`, replacing it. Throws std::runtime_error.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace qrb
