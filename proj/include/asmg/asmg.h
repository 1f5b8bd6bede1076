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

#ifndef ASMG_ASMG_H_
#define ASMG_ASMG_H_

/* C interface to the asmg solver library. All objects are opaque handles
 * owned by the caller and released with the matching destroy function.
 * Functions return an asmg_status; on failure asmg_last_error() describes
 * the error of the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ASMG_API __declspec(dllexport)
#else
#define ASMG_API __attribute__((visibility("default")))
#endif

typedef enum asmg_status {
  ASMG_OK = 0,
  ASMG_ERR_CONFIG = 1,
  ASMG_ERR_IO = 2,
  ASMG_ERR_NUMERIC = 3,
  ASMG_ERR_NOT_CONVERGED = 4,
  ASMG_ERR_INVALID_ARG = 5,
  ASMG_ERR_INTERNAL = 6
} asmg_status;

typedef struct asmg_config asmg_config;
typedef struct asmg_report asmg_report;
typedef struct asmg_field asmg_field;

ASMG_API const char* asmg_version(void);
/* Message of the last failed call on this thread, "" if none. */
ASMG_API const char* asmg_last_error(void);
ASMG_API const char* asmg_status_string(asmg_status status);

/* Configuration: key=value pairs, see asmg_config_serialize for the keys. */
ASMG_API asmg_status asmg_config_create(asmg_config** out);
ASMG_API void asmg_config_destroy(asmg_config* config);
ASMG_API asmg_status asmg_config_set(asmg_config* config, const char* key,
                                     const char* value);
/* Copies the value into buf (NUL-terminated); *needed receives the full
 * length including the terminator. */
ASMG_API asmg_status asmg_config_get(const asmg_config* config,
                                     const char* key, char* buf, size_t size,
                                     size_t* needed);
ASMG_API asmg_status asmg_config_load(asmg_config* config, const char* path);
ASMG_API asmg_status asmg_config_serialize(const asmg_config* config,
                                           char* buf, size_t size,
                                           size_t* needed);
ASMG_API asmg_status asmg_config_validate(const asmg_config* config);

/* Runs the configured experiment. On solver non-convergence *out is still
 * set and ASMG_ERR_NOT_CONVERGED is returned. */
ASMG_API asmg_status asmg_run(const asmg_config* config, asmg_report** out);

ASMG_API size_t asmg_report_rows(const asmg_report* report);
ASMG_API asmg_status asmg_report_get(const asmg_report* report, size_t row,
                                     const char* column, char* buf,
                                     size_t size, size_t* needed);
ASMG_API asmg_status asmg_report_number(const asmg_report* report, size_t row,
                                        const char* column, double* value);
ASMG_API asmg_status asmg_report_append(asmg_report* report,
                                        const asmg_report* other);
ASMG_API asmg_status asmg_report_to_csv(const asmg_report* report, char* buf,
                                        size_t size, size_t* needed);
/* Writes the report to path; rows are appended to an existing report. */
ASMG_API asmg_status asmg_report_write_csv(const asmg_report* report,
                                           const char* path);
ASMG_API void asmg_report_destroy(asmg_report* report);

/* Coefficient field of the configured case and resolution. */
ASMG_API asmg_status asmg_field_generate(const asmg_config* config,
                                         asmg_field** out);
ASMG_API int asmg_field_n(const asmg_field* field);
ASMG_API double asmg_field_contrast(const asmg_field* field);
/* Raster text format: "nx ny" then permeability K = 1/alpha row by row. */
ASMG_API asmg_status asmg_field_write_raster(const asmg_field* field,
                                             const char* path);
ASMG_API void asmg_field_destroy(asmg_field* field);

#ifdef __cplusplus
}
#endif

#endif /* ASMG_ASMG_H_ */
