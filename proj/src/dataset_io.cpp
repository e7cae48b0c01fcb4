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

#include "qrb/dataset_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qrb {

namespace {

using ojson = nlohmann::ordered_json;

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

double parse_number(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& text = table.rows[row][col];
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw CsvError(fmt::format("row {}, column {} ('{}'): '{}' is not a number", row + 2, col + 1,
                               table.header[col], text));
  }
  return value;
}

std::size_t column(const CsvTable& table, std::string_view name) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  throw CsvError(fmt::format("missing column '{}'", name));
}

bool has_columns(const CsvTable& table, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    if (std::find(table.header.begin(), table.header.end(), n) == table.header.end()) return false;
  }
  return true;
}

ojson matrix_json(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ojson interval_json(const Interval& iv) {
  return {{"estimate", iv.estimate}, {"lower", iv.lower}, {"upper", iv.upper}, {"std", iv.std_dev}};
}

}  // namespace

CsvTable read_csv(std::istream& in, std::string_view source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  char c = 0;
  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (field_started) throw CsvError(fmt::format("{}: line {}: stray quote inside a field", source, line));
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      if (in.peek() != '\n') field.push_back(c);
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw CsvError(fmt::format("{}: unterminated quoted field", source));
  if (!field.empty() || !record.empty()) end_record();

  if (records.empty()) throw CsvError(fmt::format("{}: empty file, header row required", source));
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw CsvError(fmt::format("{}: row {}: expected {} columns, found {}", source, r + 1, table.header.size(),
                                 records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(fmt::format("{}: cannot open file", path));
  return read_csv(in, path);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) { return fmt::format("{}", value); }

void write_rb_results(std::ostream& out, const RbDataset& data) {
  write_row(out, kRbResultsColumns);
  for (const RbRow& r : data.rows) {
    write_row(out, {std::to_string(r.cg_id), std::to_string(r.pr_id), std::to_string(r.truncation),
                    format_number(r.fidelity), format_number(r.std_error)});
  }
}

void write_decay_points(std::ostream& out, std::span<const DecayPoint> points) {
  write_row(out, kRbAverageColumns);
  for (const DecayPoint& p : points) {
    write_row(out, {format_number(p.length), format_number(p.fidelity), format_number(p.std_error)});
  }
}

void write_scan(std::ostream& out, const ScanDataset& data, std::string_view x_column, std::string_view y_column,
                double x_scale) {
  write_row(out, {std::string(x_column), std::string(y_column), "std_error"});
  for (const ScanRow& r : data.rows) {
    write_row(out, {format_number(r.x * x_scale), format_number(r.y), format_number(r.std_error)});
  }
}

void write_plot(std::ostream& out, std::span<const DataPoint> points) {
  write_row(out, kPlotColumns);
  for (const DataPoint& p : points) write_row(out, {format_number(p.x), format_number(p.y), format_number(p.sigma)});
}

std::vector<DecayPoint> read_rb_points(const CsvTable& table) {
  if (table.rows.empty()) throw CsvError("no data rows");
  if (has_columns(table, kRbResultsColumns)) {
    const std::size_t c_cg = column(table, "cg_id"), c_pr = column(table, "pr_id"),
                      c_l = column(table, "truncation"), c_f = column(table, "fidelity"),
                      c_e = column(table, "std_error");
    RbDataset data;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double cg = parse_number(table, r, c_cg), pr = parse_number(table, r, c_pr),
                   l = parse_number(table, r, c_l);
      if (cg < 0 || pr < 0 || l < 0 || cg != std::floor(cg) || pr != std::floor(pr) || l != std::floor(l)) {
        throw CsvError(fmt::format("row {}: ids and truncation must be non-negative integers", r + 2));
      }
      data.rows.push_back({static_cast<std::size_t>(cg), static_cast<std::size_t>(pr), static_cast<int>(l),
                           parse_number(table, r, c_f), parse_number(table, r, c_e)});
    }
    try {
      return average_by_truncation(data);
    } catch (const std::invalid_argument& e) {
      throw CsvError(e.what());
    }
  }
  if (has_columns(table, kRbAverageColumns)) {
    const std::size_t c_l = column(table, "truncation"), c_f = column(table, "fidelity"),
                      c_e = column(table, "std_error");
    std::vector<DecayPoint> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out.push_back({parse_number(table, r, c_l), parse_number(table, r, c_f), parse_number(table, r, c_e)});
    }
    return out;
  }
  throw CsvError("RB input needs columns cg_id,pr_id,truncation,fidelity,std_error or truncation,fidelity,std_error");
}

std::vector<DataPoint> read_xy_points(const CsvTable& table) {
  if (table.header.size() < 2 || table.header.size() > 3) {
    throw CsvError(fmt::format("expected 2 or 3 columns (x, y[, y uncertainty]), found {}", table.header.size()));
  }
  if (table.rows.empty()) throw CsvError("no data rows");
  std::vector<DataPoint> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    DataPoint p{parse_number(table, r, 0), parse_number(table, r, 1), 0.0};
    if (table.header.size() == 3) p.sigma = parse_number(table, r, 2);
    out.push_back(p);
  }
  return out;
}

ojson fit_to_json(const DecayFit& fit) {
  ojson j;
  j["model"] = "rb";
  j["params"] = {{"d_if", fit.d_if}, {"d", fit.d}};
  j["param_errors"] = {{"d_if", fit.d_if_error}, {"d", fit.d_error}};
  j["covariance"] = matrix_json(fit.covariance);
  j["e_g"] = fit.e_g;
  j["e_g_error"] = fit.e_g_error;
  j["chi2"] = fit.chi2;
  j["dof"] = fit.dof;
  j["n_points"] = fit.n_points;
  j["weighted"] = fit.weighted;
  j["bounded"] = fit.bounded;
  j["converged"] = fit.converged;
  j["message"] = fit.message;
  return j;
}

ojson fit_to_json(const SweepFit& fit, const std::map<std::string, std::string>& units) {
  ojson j;
  j["model"] = model_name(fit.model);
  if (fit.model == SweepModel::kDampedSinusoid) {
    j["envelope"] = fit.envelope == Envelope::kGaussian ? "gaussian" : "exponential";
  }
  ojson params = ojson::object(), errors = ojson::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto u = units.find(fit.names[i]);
    const std::string key = u == units.end() ? fit.names[i] : fit.names[i] + "_" + u->second;
    params[key] = fit.values[i];
    errors[key] = fit.errors[i];
  }
  j["params"] = params;
  j["param_errors"] = errors;
  j["covariance"] = matrix_json(fit.covariance);
  j["chi2"] = fit.chi2;
  j["dof"] = fit.dof;
  j["n_points"] = fit.n_points;
  j["converged"] = fit.converged;
  j["identifiable"] = fit.identifiable;
  j["flags"] = fit.flags;
  return j;
}

ojson bootstrap_to_json(const RbBootstrap& boot) {
  return {{"n_resamples", boot.n_resamples},
          {"n_failed", boot.n_failed},
          {"level", boot.level},
          {"d_if", interval_json(boot.d_if)},
          {"d", interval_json(boot.d)},
          {"e_g", interval_json(boot.e_g)}};
}

ojson sidecar(std::string_view command, const RunConfig& config, std::string_view code_version) {
  ojson j;
  j["qrb_sidecar"] = 1;
  j["command"] = command;
  j["seed"] = config.experiment.master_seed;
  j["code_version"] = code_version;
  j["config_fingerprint"] = config_fingerprint(config);
  j["config"] = to_json(config);
  return j;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path));
}

}  // namespace qrb
