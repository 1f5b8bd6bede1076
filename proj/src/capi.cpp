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

#include "asmg/asmg.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "asmg/error.hpp"
#include "asmg/experiment.hpp"

struct asmg_config {
  asmg::ExperimentConfig value;
};

struct asmg_report {
  asmg::Report value;
};

struct asmg_field {
  asmg::CoefficientField value;
};

namespace {

thread_local std::string last_error;

asmg_status status_of(asmg::ErrorKind kind) {
  switch (kind) {
    case asmg::ErrorKind::config:
      return ASMG_ERR_CONFIG;
    case asmg::ErrorKind::dimension:
    case asmg::ErrorKind::invalid_input:
      return ASMG_ERR_INVALID_ARG;
    case asmg::ErrorKind::io:
      return ASMG_ERR_IO;
    case asmg::ErrorKind::factorization:
    case asmg::ErrorKind::stall:
    case asmg::ErrorKind::breakdown:
      return ASMG_ERR_NUMERIC;
    case asmg::ErrorKind::internal:
      return ASMG_ERR_INTERNAL;
  }
  return ASMG_ERR_INTERNAL;
}

asmg_status set_error(asmg_status s, const std::string& what) {
  last_error = what;
  return s;
}

template <class F>
asmg_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const asmg::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ASMG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ASMG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(ASMG_ERR_INTERNAL, "unknown error");
  }
}

asmg_status null_arg(const char* name) {
  return set_error(ASMG_ERR_INVALID_ARG, std::string(name) + " is NULL");
}

asmg_status copy_out(const std::string& s, char* buf, size_t size,
                     size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) {
    if (size != 0) return null_arg("buf");
    return ASMG_OK;
  }
  if (size < s.size() + 1) {
    if (size > 0) buf[0] = '\0';
    return set_error(ASMG_ERR_INVALID_ARG,
                     "buffer of " + std::to_string(size) + " bytes too small, " +
                         std::to_string(s.size() + 1) + " needed");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return ASMG_OK;
}

}  // namespace

extern "C" {

const char* asmg_version(void) { return "1.0.0"; }

const char* asmg_last_error(void) { return last_error.c_str(); }

const char* asmg_status_string(asmg_status status) {
  switch (status) {
    case ASMG_OK:
      return "ok";
    case ASMG_ERR_CONFIG:
      return "configuration error";
    case ASMG_ERR_IO:
      return "i/o error";
    case ASMG_ERR_NUMERIC:
      return "numerical failure";
    case ASMG_ERR_NOT_CONVERGED:
      return "not converged";
    case ASMG_ERR_INVALID_ARG:
      return "invalid argument";
    case ASMG_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

asmg_status asmg_config_create(asmg_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new asmg_config{};
    return ASMG_OK;
  });
}

void asmg_config_destroy(asmg_config* config) { delete config; }

asmg_status asmg_config_set(asmg_config* config, const char* key,
                            const char* value) {
  if (!config) return null_arg("config");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    config->value.set(key, value);
    return ASMG_OK;
  });
}

asmg_status asmg_config_get(const asmg_config* config, const char* key,
                            char* buf, size_t size, size_t* needed) {
  if (!config) return null_arg("config");
  if (!key) return null_arg("key");
  return guarded(
      [&] { return copy_out(config->value.get(key), buf, size, needed); });
}

asmg_status asmg_config_load(asmg_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guarded([&] {
    config->value = asmg::ExperimentConfig::load(path);
    return ASMG_OK;
  });
}

asmg_status asmg_config_serialize(const asmg_config* config, char* buf,
                                  size_t size, size_t* needed) {
  if (!config) return null_arg("config");
  return guarded(
      [&] { return copy_out(config->value.serialize(), buf, size, needed); });
}

asmg_status asmg_config_validate(const asmg_config* config) {
  if (!config) return null_arg("config");
  return guarded([&] {
    config->value.validate();
    return ASMG_OK;
  });
}

asmg_status asmg_run(const asmg_config* config, asmg_report** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto* rep = new asmg_report{asmg::run_experiment(config->value)};
    *out = rep;
    if (rep->value.get(0, "converged") == "false")
      return set_error(ASMG_ERR_NOT_CONVERGED,
                       "no convergence within " +
                           rep->value.get(0, "iterations") + " iterations");
    return ASMG_OK;
  });
}

size_t asmg_report_rows(const asmg_report* report) {
  return report ? report->value.size() : 0;
}

asmg_status asmg_report_get(const asmg_report* report, size_t row,
                            const char* column, char* buf, size_t size,
                            size_t* needed) {
  if (!report) return null_arg("report");
  if (!column) return null_arg("column");
  if (row >= report->value.size())
    return set_error(ASMG_ERR_INVALID_ARG,
                     "row " + std::to_string(row) + " out of range");
  return guarded([&] {
    return copy_out(report->value.get(row, column), buf, size, needed);
  });
}

asmg_status asmg_report_number(const asmg_report* report, size_t row,
                               const char* column, double* value) {
  if (!report) return null_arg("report");
  if (!column) return null_arg("column");
  if (!value) return null_arg("value");
  if (row >= report->value.size())
    return set_error(ASMG_ERR_INVALID_ARG,
                     "row " + std::to_string(row) + " out of range");
  return guarded([&] {
    *value = report->value.number(row, column);
    return ASMG_OK;
  });
}

asmg_status asmg_report_append(asmg_report* report, const asmg_report* other) {
  if (!report) return null_arg("report");
  if (!other) return null_arg("other");
  return guarded([&] {
    report->value.append(other->value);
    return ASMG_OK;
  });
}

asmg_status asmg_report_to_csv(const asmg_report* report, char* buf,
                               size_t size, size_t* needed) {
  if (!report) return null_arg("report");
  return guarded([&] {
    std::ostringstream os;
    report->value.write_csv(os);
    return copy_out(os.str(), buf, size, needed);
  });
}

asmg_status asmg_report_write_csv(const asmg_report* report,
                                  const char* path) {
  if (!report) return null_arg("report");
  if (!path) return null_arg("path");
  return guarded([&] {
    asmg::Report all;
    {
      std::ifstream in(path);
      if (in && in.peek() != std::ifstream::traits_type::eof())
        all = asmg::Report::read_csv(in);
    }
    all.append(report->value);
    std::ofstream out(path);
    if (!out)
      return set_error(ASMG_ERR_IO, std::string("cannot write ") + path);
    all.write_csv(out);
    if (!out)
      return set_error(ASMG_ERR_IO, std::string("write failed: ") + path);
    return ASMG_OK;
  });
}

void asmg_report_destroy(asmg_report* report) { delete report; }

asmg_status asmg_field_generate(const asmg_config* config, asmg_field** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new asmg_field{asmg::make_field(config->value)};
    return ASMG_OK;
  });
}

int asmg_field_n(const asmg_field* field) { return field ? field->value.n() : 0; }

double asmg_field_contrast(const asmg_field* field) {
  return field ? asmg::contrast(field->value) : 0.0;
}

asmg_status asmg_field_write_raster(const asmg_field* field,
                                    const char* path) {
  if (!field) return null_arg("field");
  if (!path) return null_arg("path");
  return guarded([&] {
    std::ofstream out(path);
    if (!out)
      return set_error(ASMG_ERR_IO, std::string("cannot write ") + path);
    asmg::write_raster(out, asmg::to_raster(field->value));
    if (!out)
      return set_error(ASMG_ERR_IO, std::string("write failed: ") + path);
    return ASMG_OK;
  });
}

void asmg_field_destroy(asmg_field* field) { delete field; }

}  // extern "C"
