/* Copyright 2026 The sbvapprox Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Plain C client of the shared library. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include <sbvapprox/sbvapprox.h>

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_names(void) {
  EXPECT(strcmp(sbv_status_name(SBV_OK), "ok") == 0);
  EXPECT(sbv_command_count() == 5);
  EXPECT(sbv_preset_count() > 0);
  EXPECT(sbv_command_name(sbv_command_count()) == NULL);
  EXPECT(sbv_exit_code_for_status(SBV_VALIDATION) == 2);
  EXPECT(sbv_exit_code_for_status(SBV_JUMP_SET_TOO_LARGE) == 1);
  EXPECT(sbv_exit_code_for_status(SBV_INTERNAL) == 3);
}

static void test_merge(void) {
  sbv_ball a = {0, 0, 1, 0}, b = {3, 0, 1, 1}, m;
  EXPECT(sbv_merge_pair(&a, &b, &m) == SBV_OK);
  EXPECT(fabs(m.cx - 1.5) < 1e-12 && fabs(m.r - 2.0) < 1e-12);
  sbv_ball bad = {0, 0, -1, 2};
  EXPECT(sbv_merge_pair(&a, &bad, &m) != SBV_OK);
  EXPECT(strlen(sbv_last_error()) > 0);
  EXPECT(sbv_merge_pair(NULL, &b, &m) == SBV_INVALID_ARGUMENT);
}

static void test_active(void) {
  sbv_ball balls[2] = {{0, 0, 1, 0}, {4, 0, 1, 1}};
  sbv_ball out[4];
  size_t count = 0;
  EXPECT(sbv_construction_active(balls, 2, 0.5, out, 4, &count) == SBV_OK);
  EXPECT(count == 2);
  EXPECT(sbv_construction_active(balls, 2, 1.0, out, 4, &count) == SBV_OK);
  EXPECT(count == 1);
  EXPECT(fabs(out[0].cx - 2.0) < 1e-9 && fabs(out[0].r - 2.0 * exp(1.0)) < 1e-9);
  EXPECT(sbv_construction_active(balls, 2, 0.5, out, 1, &count) == SBV_OK);
  EXPECT(count == 2);
}

static void test_run(void) {
  const char* json =
      "{\"balls\": [{\"id\": 0, \"cx\": 0, \"cy\": 0, \"r\": 1},"
      "            {\"id\": 1, \"cx\": 4, \"cy\": 0, \"r\": 1}],"
      " \"params\": {\"T\": 1}}";
  sbv_scenario* s = NULL;
  EXPECT(sbv_scenario_parse(json, &s) == SBV_OK);
  if (!s) return;
  uint64_t h = sbv_scenario_hash(s);
  EXPECT(strstr(sbv_scenario_canonical(s), "\"params\"") != NULL);
  EXPECT(sbv_scenario_override(s, "{\"T\": 2}") == SBV_OK);
  EXPECT(sbv_scenario_hash(s) != h);
  EXPECT(sbv_scenario_override(s, "{\"nope\": 1}") == SBV_VALIDATION);

  sbv_result* r = NULL;
  EXPECT(sbv_run(s, "balls", 1, &r) == SBV_OK);
  if (r) {
    EXPECT(sbv_result_passed(r) == 1);
    EXPECT(sbv_result_exit_code(r) == 0);
    EXPECT(strstr(sbv_result_report(r), "\"pass\": true") != NULL);
    int found = 0;
    for (size_t i = 0; i < sbv_result_artifact_count(r); ++i) {
      size_t n = 0;
      const char* data = sbv_result_artifact_data(r, i, &n);
      if (strcmp(sbv_result_artifact_name(r, i), "events.csv") == 0) {
        found = 1;
        EXPECT(n > 0 && data != NULL);
      }
    }
    EXPECT(found);
    sbv_result_free(r);
  }
  EXPECT(sbv_run(s, "approx3d", 1, &r) == SBV_VALIDATION);
  sbv_scenario_free(s);
}

static void test_bad_input(void) {
  sbv_scenario* s = NULL;
  EXPECT(sbv_scenario_parse("{\"domain\": {\"margin\": -1}}", &s) == SBV_VALIDATION);
  EXPECT(s == NULL);
  EXPECT(strstr(sbv_last_error(), "domain.margin") != NULL);
  EXPECT(sbv_scenario_parse("not json", &s) == SBV_VALIDATION);
  EXPECT(sbv_scenario_load("/nonexistent/x.json", &s) == SBV_IO);
  sbv_scenario_free(NULL);
  sbv_result_free(NULL);
}

int main(void) {
  test_names();
  test_merge();
  test_active();
  test_run();
  test_bad_input();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}
