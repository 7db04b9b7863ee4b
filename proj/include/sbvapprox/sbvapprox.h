// Copyright 2026 The sbvapprox Authors.
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


#ifndef SBVAPPROX_SBVAPPROX_H_
#define SBVAPPROX_SBVAPPROX_H_

/* C interface to the sbvapprox library. Handles are opaque; every call that
 * can fail returns an sbv_status and leaves a message for sbv_last_error().
 * Strings returned by accessors are owned by the handle and stay valid until
 * it is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(SBV_BUILDING_LIBRARY)
#define SBV_API __attribute__((visibility("default")))
#else
#define SBV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbv_status {
  SBV_OK = 0,
  SBV_INVALID_ARGUMENT = 1,
  SBV_DEGENERATE_INPUT = 2,
  SBV_PRECONDITION = 3,
  SBV_JUMP_SET_TOO_LARGE = 4,
  SBV_VALIDATION = 5,
  SBV_BOUND_VIOLATION = 6,
  SBV_UNBOUNDED_ENERGY = 7,
  SBV_IO = 8,
  SBV_INTERNAL = 9
} sbv_status;

typedef struct sbv_scenario sbv_scenario;
typedef struct sbv_result sbv_result;

typedef struct sbv_ball {
  double cx, cy, r;
  int id;
} sbv_ball;

SBV_API const char* sbv_version(void);
SBV_API const char* sbv_status_name(sbv_status s);

/* Message for the last failed call on this thread; empty if none. */
SBV_API const char* sbv_last_error(void);

/* Process exit code for a status: 0 ok, 1 bound violation or refused
 * hypothesis, 2 invalid input, 3 internal. */
SBV_API int sbv_exit_code_for_status(sbv_status s);

SBV_API size_t sbv_command_count(void);
SBV_API const char* sbv_command_name(size_t i);
SBV_API size_t sbv_preset_count(void);
SBV_API const char* sbv_preset_name(size_t i);

/* Scenarios. */
SBV_API sbv_status sbv_scenario_load(const char* path, sbv_scenario** out);
SBV_API sbv_status sbv_scenario_parse(const char* json, sbv_scenario** out);
/* Overrides are a JSON object such as {"p": 4, "T": 2, "grid": 0.01}.
 * On failure the scenario is left unchanged. */
SBV_API sbv_status sbv_scenario_override(sbv_scenario* s, const char* overrides_json);
SBV_API const char* sbv_scenario_canonical(const sbv_scenario* s);
SBV_API uint64_t sbv_scenario_hash(const sbv_scenario* s);
SBV_API void sbv_scenario_free(sbv_scenario* s);

/* Runs a command ("balls", "approx2d", ...). A failing check or a refused
 * hypothesis still yields a result; inspect sbv_result_exit_code. */
SBV_API sbv_status sbv_run(const sbv_scenario* s, const char* command, int threads,
                           sbv_result** out);
SBV_API const char* sbv_result_report(const sbv_result* r);
SBV_API int sbv_result_passed(const sbv_result* r);
SBV_API int sbv_result_exit_code(const sbv_result* r);
SBV_API size_t sbv_result_artifact_count(const sbv_result* r);
SBV_API const char* sbv_result_artifact_name(const sbv_result* r, size_t i);
SBV_API const char* sbv_result_artifact_data(const sbv_result* r, size_t i, size_t* size);
/* Writes report.json and the artifacts into dir, creating it. */
SBV_API sbv_status sbv_result_write(const sbv_result* r, const char* dir);
SBV_API void sbv_result_free(sbv_result* r);

/* Direct access to the ball construction. */
SBV_API sbv_status sbv_merge_pair(const sbv_ball* a, const sbv_ball* b, sbv_ball* out);
/* Active family at time t. Writes up to cap balls and the full count. */
SBV_API sbv_status sbv_construction_active(const sbv_ball* balls, size_t n, double t,
                                           sbv_ball* out, size_t cap, size_t* count);

#ifdef __cplusplus
}
#endif

#endif  // SBVAPPROX_SBVAPPROX_H_
