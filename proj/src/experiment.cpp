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

#include "asmg/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "asmg/diagnostics.hpp"
#include "asmg/error.hpp"
#include "asmg/parallel.hpp"
#include "asmg/solvers.hpp"

namespace asmg {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  fail(ErrorKind::config, "config: " + key + "=\"" + value + "\": expected " +
                              expected);
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) bad_value(key, value, "an integer");
  return v;
}

int parse_int(const std::string& key, const std::string& value, int lo,
              int hi) {
  const long long v = parse_integer(key, value);
  if (v < lo || v > hi)
    bad_value(key, value,
              "an integer in [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v))
    bad_value(key, value, "a finite number");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::run:
      return "run";
    case Command::minres:
      return "minres";
    case Command::diag:
      return "diag";
    case Command::gen:
      return "gen";
  }
  return "run";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "id",        "command",   "case",       "n",
      "levels",    "q",         "seed",       "cycle",
      "m",         "smoother",  "linear",     "varpi",
      "tol",       "max_iter",  "inner_tol",  "inner_max_iter",
      "tau",       "sub_cells", "stride",     "rhs_c",
      "coeff_file", "out",      "cpi",        "rho_e",
      "complexity"};
  return k;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "id") {
    if (value.empty() || value.find_first_of(",\n") != std::string::npos)
      bad_value(key, value, "a non-empty name without commas");
    id = value;
  } else if (key == "command") {
    if (value == "run") command = Command::run;
    else if (value == "minres") command = Command::minres;
    else if (value == "diag") command = Command::diag;
    else if (value == "gen") command = Command::gen;
    else bad_value(key, value, "run, minres, diag or gen");
  } else if (key == "case") {
    if (value != "a" && value != "b" && value != "c")
      bad_value(key, value, "a, b or c");
    case_id = value[0];
  } else if (key == "n") {
    n = parse_int(key, value, 2, 1 << 14);
  } else if (key == "levels") {
    levels = parse_int(key, value, 0, 14);
  } else if (key == "q") {
    q = parse_int(key, value, 0, 16);
  } else if (key == "seed") {
    std::uint64_t v = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (value.empty() || ec != std::errc() || ptr != end)
      bad_value(key, value, "a non-negative 64-bit integer");
    seed = v;
  } else if (key == "cycle" || key == "nu") {
    if (value == "V") nu = 1;
    else if (value == "W") nu = 2;
    else nu = parse_int(key, value, 1, 8);
  } else if (key == "m") {
    m = parse_int(key, value, 0, 100);
  } else if (key == "smoother") {
    if (value != "gs" && value != "jacobi")
      bad_value(key, value, "gs or jacobi");
    smoother = value;
  } else if (key == "linear") {
    linear = parse_bool(key, value);
  } else if (key == "varpi") {
    varpi = parse_double(key, value);
    if (!(varpi > 1.0)) bad_value(key, value, "a number > 1");
  } else if (key == "tol") {
    tol = parse_double(key, value);
    if (!(tol > 0.0 && tol < 1.0)) bad_value(key, value, "a number in (0, 1)");
  } else if (key == "max_iter") {
    max_iter = parse_int(key, value, 1, 1000000);
  } else if (key == "inner_tol") {
    inner_tol = parse_double(key, value);
    if (!(inner_tol > 0.0 && inner_tol < 1.0))
      bad_value(key, value, "a number in (0, 1)");
  } else if (key == "inner_max_iter") {
    inner_max_iter = parse_int(key, value, 1, 1000000);
  } else if (key == "tau") {
    tau = parse_double(key, value);
    if (!(tau >= 1.0)) bad_value(key, value, "a number >= 1");
  } else if (key == "sub_cells") {
    sub_cells = parse_int(key, value, 2, 1 << 14);
  } else if (key == "stride") {
    stride = parse_int(key, value, 2, 1 << 14);
  } else if (key == "rhs_c") {
    rhs_c = parse_double(key, value);
  } else if (key == "coeff_file") {
    coeff_file = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "cpi") {
    cpi = parse_bool(key, value);
  } else if (key == "rho_e") {
    rho_e = parse_bool(key, value);
  } else if (key == "complexity") {
    complexity = parse_bool(key, value);
  } else {
    fail(ErrorKind::config, "config: unknown key \"" + key + "\"");
  }
}

std::string ExperimentConfig::get(const std::string& key) const {
  if (key == "id") return id;
  if (key == "command") return command_name(command);
  if (key == "case") return std::string(1, case_id);
  if (key == "n") return std::to_string(n);
  if (key == "levels") return std::to_string(levels);
  if (key == "q") return std::to_string(q);
  if (key == "seed") return std::to_string(seed);
  if (key == "cycle" || key == "nu")
    return nu == 1 ? "V" : nu == 2 ? "W" : std::to_string(nu);
  if (key == "m") return std::to_string(m);
  if (key == "smoother") return smoother;
  if (key == "linear") return linear ? "true" : "false";
  if (key == "varpi") return format_double(varpi);
  if (key == "tol") return format_double(tol);
  if (key == "max_iter") return std::to_string(max_iter);
  if (key == "inner_tol") return format_double(inner_tol);
  if (key == "inner_max_iter") return std::to_string(inner_max_iter);
  if (key == "tau") return format_double(tau);
  if (key == "sub_cells") return std::to_string(sub_cells);
  if (key == "stride") return std::to_string(stride);
  if (key == "rhs_c") return format_double(rhs_c);
  if (key == "coeff_file") return coeff_file;
  if (key == "out") return out;
  if (key == "cpi") return cpi ? "true" : "false";
  if (key == "rho_e") return rho_e ? "true" : "false";
  if (key == "complexity") return complexity ? "true" : "false";
  fail(ErrorKind::config, "config: unknown key \"" + key + "\"");
}

void ExperimentConfig::validate() const {
  if (!is_power_of_two(n))
    fail(ErrorKind::config, "config: n=" + std::to_string(n) +
                                " must be a power of two");
  if (command != Command::gen && (n >> levels) < 1)
    fail(ErrorKind::config, "config: a " + std::to_string(n) + "x" +
                                std::to_string(n) +
                                " grid cannot be coarsened " +
                                std::to_string(levels) + " times");
  if (case_id == 'c' && coeff_file.empty())
    fail(ErrorKind::config, "config: case c needs a raster (coeff_file)");
  if (stride % 2 != 0 || stride > sub_cells)
    fail(ErrorKind::config,
         "config: stride must be even and at most sub_cells");
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  for (const auto& k : keys()) os << k << '=' << get(k) << '\n';
  return os.str();
}

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, "config line " + std::to_string(lineno) +
                                  ": expected key=value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "config: cannot open " + path);
  return parse(in);
}

const std::vector<std::string>& Report::columns() {
  static const std::vector<std::string> c = {
      "id",          "command",       "case",
      "n",           "levels",        "q",
      "seed",        "cycle",         "m",
      "dofs",        "contrast",      "iterations",
      "converged",   "rho_r",         "true_residual",
      "max_inner_iterations", "max_asmg_iterations", "c_pi",
      "rho_e",       "complexity",    "column_bound_violations",
      "nnz_levels",  "setup_seconds", "solve_seconds"};
  return c;
}

namespace {

std::size_t column_index(const std::string& column) {
  const auto& cols = Report::columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == column) return i;
  fail(ErrorKind::config, "report: unknown column \"" + column + "\"");
}

}  // namespace

std::size_t Report::add_row() {
  rows_.emplace_back(columns().size());
  return rows_.size() - 1;
}

void Report::set(std::size_t row, const std::string& column,
                 const std::string& v) {
  if (v.find_first_of(",\n") != std::string::npos)
    fail(ErrorKind::invalid_input, "report: value contains a separator");
  rows_.at(row)[column_index(column)] = v;
}

void Report::set(std::size_t row, const std::string& column, double v) {
  set(row, column, format_double(v));
}

void Report::set(std::size_t row, const std::string& column, long v) {
  set(row, column, std::to_string(v));
}

const std::string& Report::get(std::size_t row,
                               const std::string& column) const {
  return rows_.at(row)[column_index(column)];
}

double Report::number(std::size_t row, const std::string& column) const {
  const std::string& s = get(row, column);
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

void Report::append(const Report& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

void Report::write_csv(std::ostream& os) const {
  os << "# asmg-report v1\n";
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

Report Report::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# asmg-report v1")
    fail(ErrorKind::io, "report: missing \"# asmg-report v1\" header");
  if (!std::getline(is, line))
    fail(ErrorKind::io, "report: missing column header");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header != columns())
    fail(ErrorKind::io, "report: unexpected column set");
  Report rep;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != header.size())
      fail(ErrorKind::io, "report: row has " + std::to_string(cells.size()) +
                              " cells, expected " +
                              std::to_string(header.size()));
    rep.rows_.push_back(std::move(cells));
  }
  return rep;
}

CoefficientField make_field(const ExperimentConfig& config) {
  switch (config.case_id) {
    case 'a':
      return gen_binary_islands(config.n, config.q, {});
    case 'b':
      return gen_random_field(config.n, config.q, config.seed, {});
    case 'c':
      return resample(load_raster(config.coeff_file), config.n);
    default:
      fail(ErrorKind::config, "config: unknown case");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

AmliConfig amli_config(const ExperimentConfig& c) {
  AmliConfig a;
  a.nu = c.nu;
  a.smoother.sweeps = c.m;
  a.smoother.kind =
      c.smoother == "jacobi" ? SmootherKind::jacobi : SmootherKind::gauss_seidel;
  a.inner_tol = c.inner_tol;
  a.inner_max_iter = c.inner_max_iter;
  a.linear = c.linear;
  a.tau = c.tau;
  return a;
}

std::string nnz_list(const ComplexityReport& cr) {
  std::string s;
  for (std::size_t k = 0; k < cr.nnz.size(); ++k)
    s += (k ? ";" : "") + std::to_string(cr.nnz[k]);
  return s;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  Report rep;
  const std::size_t row = rep.add_row();
  for (const char* k : {"id", "command", "case", "n", "levels", "q", "seed",
                        "cycle", "m"})
    rep.set(row, k, config.get(k));

  const Grid grid = build_grid(config.n);
  const CoefficientField field = make_field(config);
  rep.set(row, "contrast", contrast(field));
  if (config.command == Command::gen) {
    rep.set(row, "dofs", static_cast<long>(grid.num_edges()));
    return rep;
  }

  const auto t_setup = Clock::now();
  const HierarchyConfig hc{config.levels, config.sub_cells, config.stride};
  auto hierarchy =
      std::make_shared<const Hierarchy>(build_hierarchy(grid, field, hc));
  const ComplexityReport cr = operator_complexity(*hierarchy);
  rep.set(row, "complexity", cr.ratio);
  rep.set(row, "column_bound_violations", cr.bound_violations);
  rep.set(row, "nnz_levels", nnz_list(cr));

  if (config.command == Command::run) {
    auto precond =
        std::make_shared<AsmgPreconditioner>(hierarchy, amli_config(config));
    rep.set(row, "setup_seconds", seconds_since(t_setup));
    const CsrMatrix& a = hierarchy->matrix(0);
    const int n = a.rows();
    rep.set(row, "dofs", static_cast<long>(n));
    {
      Vector r = random_vector(n, config.seed + 1), z(n);
      precond->apply(r, z);  // warm-up
    }
    ApplyStats stats;
    Vector x = random_vector(n, config.seed), b(n, 0.0);
    const auto t_solve = Clock::now();
    const IterationResult res = gcg(as_operator(a), precond->as_operator(&stats),
                                    b, x, {config.tol, config.max_iter});
    rep.set(row, "solve_seconds", seconds_since(t_solve));
    rep.set(row, "iterations", static_cast<long>(res.iterations));
    rep.set(row, "converged", res.converged ? "true" : "false");
    if (res.iterations > 0) rep.set(row, "rho_r", rho_r(res.residuals));
    rep.set(row, "max_inner_iterations",
            static_cast<long>(stats.max_inner_iterations));
  } else if (config.command == Command::minres) {
    const Vector source = assemble_rhs(grid, config.rhs_c);
    const SaddleSystem system = assemble_saddle(grid, field, source);
    auto precond =
        std::make_shared<AsmgPreconditioner>(hierarchy, amli_config(config));
    const BlockPreconditioner block(system, precond, config.varpi);
    rep.set(row, "setup_seconds", seconds_since(t_setup));
    rep.set(row, "dofs", static_cast<long>(system.size()));
    {
      Vector r = random_vector(system.size(), config.seed + 1),
             z(system.size());
      block.apply(r, z);  // warm-up
    }
    Vector x(system.size());
    SaddleSolveOptions opts;
    opts.tol = config.tol;
    opts.max_iter = config.max_iter;
    opts.random_guess = config.rhs_c == 0.0;
    opts.seed = config.seed;
    const auto t_solve = Clock::now();
    const SaddleSolveReport sr = solve_saddle(system, block, x, opts);
    rep.set(row, "solve_seconds", seconds_since(t_solve));
    rep.set(row, "iterations", static_cast<long>(sr.minres.iterations));
    rep.set(row, "converged", sr.minres.converged ? "true" : "false");
    if (sr.minres.iterations > 0) rep.set(row, "rho_r", rho_r(sr.minres.residuals));
    rep.set(row, "true_residual", sr.true_residual);
    rep.set(row, "max_inner_iterations",
            static_cast<long>(sr.max_inner_iterations));
    rep.set(row, "max_asmg_iterations",
            static_cast<long>(sr.max_velocity_iterations));
  } else {
    rep.set(row, "dofs", static_cast<long>(hierarchy->matrix(0).rows()));
    const bool all = !config.cpi && !config.rho_e && !config.complexity;
    AmliConfig exact = amli_config(config);
    exact.direct_d_solve = true;
    exact.linear = true;
    rep.set(row, "setup_seconds", seconds_since(t_setup));
    const auto t_solve = Clock::now();
    if ((all || config.cpi) && hierarchy->levels() > 0) {
      const AsmgPreconditioner p(hierarchy, exact);
      rep.set(row, "c_pi", estimate_c_pi(p, 0).value);
    }
    if (all || config.rho_e) {
      const AsmgPreconditioner p(hierarchy, exact);
      const PowerEstimate e =
          estimate_rho_e(hierarchy->matrix(0), p.as_operator(), 500, 1e-4,
                         config.seed);
      rep.set(row, "rho_e", e.value);
      rep.set(row, "iterations", static_cast<long>(e.iterations));
      rep.set(row, "converged", e.converged ? "true" : "false");
    }
    rep.set(row, "solve_seconds", seconds_since(t_solve));
  }
  return rep;
}

Report run_batch(std::span<const ExperimentConfig> configs) {
  std::vector<Report> parts(configs.size());
  parallel_for(configs.size(),
               [&](std::size_t i) { parts[i] = run_experiment(configs[i]); });
  Report all;
  for (const auto& p : parts) all.append(p);
  return all;
}

}  // namespace asmg
