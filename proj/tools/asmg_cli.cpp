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

// Command line front end. Uses only the C interface in asmg/asmg.h.

#include <deque>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "asmg/asmg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

int exit_code(asmg_status s) {
  switch (s) {
    case ASMG_OK:
      return kExitOk;
    case ASMG_ERR_NOT_CONVERGED:
      return kExitNotConverged;
    case ASMG_ERR_CONFIG:
    case ASMG_ERR_INVALID_ARG:
      return kExitConfig;
    case ASMG_ERR_IO:
      return kExitIo;
    default:
      return kExitOther;
  }
}

int report_failure(asmg_status s) {
  std::cerr << "asmg: " << asmg_status_string(s) << ": " << asmg_last_error()
            << '\n';
  return exit_code(s);
}

// Option values as text, keyed by configuration key.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::deque<std::string> storage;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    std::string& slot = storage.emplace_back();
    options.emplace_back(key, app->add_option(flag, slot, help));
  }

  void add_flag(CLI::App* app, const std::string& flag, const std::string& key,
                const std::string& help) {
    options.emplace_back(key, app->add_flag(flag, help));
  }

  std::vector<std::pair<std::string, std::string>> given() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      if (opt->get_expected_min() == 0)
        out.emplace_back(key, "true");
      else
        out.emplace_back(key, opt->as<std::string>());
    }
    return out;
  }
};

void add_common(CLI::App* sub, Overrides& o) {
  o.add(sub, "--case", "case", "Coefficient case: a, b or c");
  o.add(sub, "--n", "n", "Cells per side (power of two)");
  o.add(sub, "--levels", "levels", "Number of coarsening steps");
  o.add(sub, "--q", "q", "Contrast exponent, contrast 10^q");
  o.add(sub, "--seed", "seed", "Random seed");
  o.add(sub, "--coeff-file", "coeff_file", "Permeability raster for case c");
  o.add(sub, "--sub-cells", "sub_cells", "Subdomain side in cells");
  o.add(sub, "--stride", "stride", "Subdomain stride in cells");
  o.add(sub, "--id", "id", "Experiment name in the report");
}

void add_cycle(CLI::App* sub, Overrides& o) {
  o.add(sub, "--cycle", "cycle", "V or W");
  o.add(sub, "--nu", "nu", "Inner iterations per coarse correction");
  o.add(sub, "--m", "m", "Smoothing sweeps");
  o.add(sub, "--smoother", "smoother", "gs or jacobi");
  o.add_flag(sub, "--linear", "linear", "Linear AMLI cycle");
  o.add(sub, "--tol", "tol", "Relative residual tolerance");
  o.add(sub, "--max-iter", "max_iter", "Outer iteration limit");
  o.add(sub, "--inner-tol", "inner_tol", "Tolerance of the inner fine solves");
  o.add(sub, "--tau", "tau", "Relaxation: the auxiliary correction is divided by tau");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auxiliary space multigrid for mixed Darcy problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(asmg_version()));

  std::string config_path;
  std::string out_path;
  app.add_option("--config", config_path, "Configuration file (key=value)");

  struct Sub {
    Sub(const char* n, const char* h) : name(n), help(h) {}
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
    Overrides overrides;
  };
  std::vector<Sub> subs;
  subs.reserve(4);
  subs.emplace_back("run", "Standalone GCG solve with the multigrid preconditioner");
  subs.emplace_back("minres", "Preconditioned MinRes for the saddle point system");
  subs.emplace_back("diag", "Spectral diagnostics and operator complexity");
  subs.emplace_back("gen", "Generate a coefficient field raster");
  for (auto& s : subs) {
    s.app = app.add_subcommand(s.name, s.help);
    s.app->add_option("--config", config_path, "Configuration file (key=value)");
    s.app->add_option("--out", out_path, "Output file (CSV report or raster)");
    add_common(s.app, s.overrides);
  }
  add_cycle(subs[0].app, subs[0].overrides);
  add_cycle(subs[1].app, subs[1].overrides);
  subs[1].overrides.add(subs[1].app, "--varpi", "varpi",
                        "Residual reduction of the velocity block solve");
  subs[1].overrides.add(subs[1].app, "--rhs-c", "rhs_c",
                        "Source amplitude; 0 gives the random initial guess");
  add_cycle(subs[2].app, subs[2].overrides);
  subs[2].overrides.add_flag(subs[2].app, "--cpi", "cpi", "Estimate c_Pi");
  subs[2].overrides.add_flag(subs[2].app, "--rho-e", "rho_e",
                             "Estimate the error reduction factor");
  subs[2].overrides.add_flag(subs[2].app, "--complexity", "complexity",
                             "Report operator complexity (skips c_Pi and rho_e unless requested)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) chosen = &s;

  asmg_config* config = nullptr;
  asmg_status st = asmg_config_create(&config);
  if (st != ASMG_OK) return report_failure(st);
  struct ConfigGuard {
    asmg_config* c;
    ~ConfigGuard() { asmg_config_destroy(c); }
  } guard{config};

  if (!config_path.empty() &&
      (st = asmg_config_load(config, config_path.c_str())) != ASMG_OK)
    return report_failure(st);
  if ((st = asmg_config_set(config, "command", chosen->name)) != ASMG_OK)
    return report_failure(st);
  for (const auto& [key, value] : chosen->overrides.given()) {
    if ((st = asmg_config_set(config, key.c_str(), value.c_str())) != ASMG_OK)
      return report_failure(st);
  }
  if (!out_path.empty() &&
      (st = asmg_config_set(config, "out", out_path.c_str())) != ASMG_OK)
    return report_failure(st);

  char out_buf[4096];
  size_t needed = 0;
  if ((st = asmg_config_get(config, "out", out_buf, sizeof out_buf,
                            &needed)) != ASMG_OK)
    return report_failure(st);
  const std::string out(out_buf);

  if (std::string(chosen->name) == "gen") {
    if ((st = asmg_config_validate(config)) != ASMG_OK)
      return report_failure(st);
    if (out.empty()) {
      std::cerr << "asmg: gen needs --out\n";
      return kExitConfig;
    }
    asmg_field* field = nullptr;
    if ((st = asmg_field_generate(config, &field)) != ASMG_OK)
      return report_failure(st);
    st = asmg_field_write_raster(field, out.c_str());
    std::cout << "n=" << asmg_field_n(field)
              << " contrast=" << asmg_field_contrast(field) << " -> " << out
              << '\n';
    asmg_field_destroy(field);
    return st == ASMG_OK ? kExitOk : report_failure(st);
  }

  asmg_report* report = nullptr;
  const asmg_status run_status = asmg_run(config, &report);
  if (!report) return report_failure(run_status);
  if (run_status != ASMG_OK)
    std::cerr << "asmg: " << asmg_last_error() << '\n';

  if ((st = asmg_report_to_csv(report, nullptr, 0, &needed)) == ASMG_OK) {
    std::string csv(needed, '\0');
    st = asmg_report_to_csv(report, csv.data(), csv.size(), &needed);
    if (st == ASMG_OK) std::cout << csv.c_str();
  }
  if (st == ASMG_OK && !out.empty())
    st = asmg_report_write_csv(report, out.c_str());
  asmg_report_destroy(report);
  if (st != ASMG_OK) return report_failure(st);
  return exit_code(run_status);
}
