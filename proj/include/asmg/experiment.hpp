/*
 Copyright 2026 The asmg Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

// Experiment configuration (flat key=value text), CSV reports and the
// runner behind the command line tool.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "asmg/coeff.hpp"

namespace asmg {

enum class Command { run, minres, diag, gen };

struct ExperimentConfig {
  std::string id = "exp";
  Command command = Command::run;
  char case_id = 'b';  // a: binary islands, b: random background, c: raster
  int n = 32;
  int levels = 3;  // coarsening steps
  int q = 0;
  std::uint64_t seed = 1;
  int nu = 1;  // 1: V-cycle, 2: W-cycle
  int m = 0;   // smoothing steps
  std::string smoother = "gs";  // gs | jacobi
  bool linear = false;
  double varpi = 1e8;
  double tol = 1e-8;
  int max_iter = 500;
  double inner_tol = 1e-6;
  int inner_max_iter = 200;
  double tau = 1.0;
  int sub_cells = 8;
  int stride = 4;
  double rhs_c = 0.0;
  std::string coeff_file;
  std::string out;
  bool cpi = false;
  bool rho_e = false;
  bool complexity = false;

  /// Sets one field from its textual form; unknown keys and malformed or
  /// out-of-range values throw ErrorKind::config.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  /// Cross-field checks (power-of-two n, feasible depth, raster for case c).
  void validate() const;

  /// key=value lines in keys() order; parse() accepts '#' comments and
  /// blank lines. parse(serialize()) reproduces the configuration.
  std::string serialize() const;
  static ExperimentConfig parse(std::istream& is);
  static ExperimentConfig load(const std::string& path);
};

/// Rows of named values with a fixed column set. Values are stored as
/// text so that a CSV round trip is lossless.
class Report {
 public:
  static const std::vector<std::string>& columns();

  std::size_t size() const { return rows_.size(); }
  std::size_t add_row();
  void set(std::size_t row, const std::string& column, const std::string& v);
  void set(std::size_t row, const std::string& column, double v);
  void set(std::size_t row, const std::string& column, long v);
  const std::string& get(std::size_t row, const std::string& column) const;
  /// NaN when the cell is empty.
  double number(std::size_t row, const std::string& column) const;
  void append(const Report& other);

  void write_csv(std::ostream& os) const;
  static Report read_csv(std::istream& is);

  bool operator==(const Report& other) const { return rows_ == other.rows_; }

 private:
  std::vector<std::vector<std::string>> rows_;
};

/// Coefficient field of the configured case, resolution n.
CoefficientField make_field(const ExperimentConfig& config);

/// Runs one experiment and returns a single-row report. Solver
/// non-convergence is recorded in the "converged" column, not thrown.
Report run_experiment(const ExperimentConfig& config);

/// Independent experiments, possibly concurrently; rows in input order.
Report run_batch(std::span<const ExperimentConfig> configs);

}  // namespace asmg
