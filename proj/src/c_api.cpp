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

#include "sbvapprox/sbvapprox.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "ball_construction.hpp"
#include "experiments.hpp"
#include "scenario.hpp"

struct sbv_scenario {
  sbv::Scenario scenario;
  std::string canonical;
};

struct sbv_result {
  sbv::RunResult run;
  std::string report;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

thread_local std::string g_last_error;

sbv_status fail(sbv_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into a status and the thread's message.
template <class F>
sbv_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return SBV_OK;
  } catch (const sbv::Error& e) {
    return fail(static_cast<sbv_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SBV_VALIDATION, std::string("malformed JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(SBV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SBV_INTERNAL, e.what());
  } catch (...) {
    return fail(SBV_INTERNAL, "unknown error");
  }
}

sbv_scenario* wrap(sbv::Scenario s) {
  auto* h = new sbv_scenario{std::move(s), {}};
  h->canonical = h->scenario.canonical.dump(2);
  return h;
}

sbv::Ball to_ball(const sbv_ball& b) { return sbv::Ball{{b.cx, b.cy}, b.r, b.id}; }
sbv_ball from_ball(const sbv::Ball& b) { return sbv_ball{b.center.x, b.center.y, b.radius, b.id}; }

}  // namespace

extern "C" {

const char* sbv_version(void) { return sbv::kVersion; }

const char* sbv_status_name(sbv_status s) {
  switch (s) {
    case SBV_OK: return "ok";
    case SBV_INVALID_ARGUMENT: return "invalid_argument";
    case SBV_DEGENERATE_INPUT: return "degenerate_input";
    case SBV_PRECONDITION: return "precondition";
    case SBV_JUMP_SET_TOO_LARGE: return "jump_set_too_large";
    case SBV_VALIDATION: return "validation";
    case SBV_BOUND_VIOLATION: return "bound_violation";
    case SBV_UNBOUNDED_ENERGY: return "unbounded_energy";
    case SBV_IO: return "io";
    case SBV_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* sbv_last_error(void) { return g_last_error.c_str(); }

int sbv_exit_code_for_status(sbv_status s) {
  return sbv::exit_code(static_cast<sbv::ErrorCode>(s));
}

size_t sbv_command_count(void) { return sbv::command_names().size(); }

const char* sbv_command_name(size_t i) {
  static const std::vector<std::string> names = sbv::command_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

size_t sbv_preset_count(void) { return sbv::preset_names().size(); }

const char* sbv_preset_name(size_t i) {
  static const std::vector<std::string> names = sbv::preset_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

sbv_status sbv_scenario_load(const char* path, sbv_scenario** out) {
  if (!path || !out) return fail(SBV_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = wrap(sbv::load_scenario(path)); });
}

sbv_status sbv_scenario_parse(const char* json, sbv_scenario** out) {
  if (!json || !out) return fail(SBV_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = wrap(sbv::parse_scenario(sbv::Json::parse(json))); });
}

sbv_status sbv_scenario_override(sbv_scenario* s, const char* overrides_json) {
  if (!s || !overrides_json) return fail(SBV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    sbv::Scenario next = sbv::with_overrides(s->scenario, sbv::Json::parse(overrides_json));
    s->scenario = std::move(next);
    s->canonical = s->scenario.canonical.dump(2);
  });
}

const char* sbv_scenario_canonical(const sbv_scenario* s) {
  return s ? s->canonical.c_str() : nullptr;
}

uint64_t sbv_scenario_hash(const sbv_scenario* s) { return s ? s->scenario.hash : 0; }

void sbv_scenario_free(sbv_scenario* s) { delete s; }

sbv_status sbv_run(const sbv_scenario* s, const char* command, int threads, sbv_result** out) {
  if (!s || !command || !out) return fail(SBV_INVALID_ARGUMENT, "null argument");
  if (threads < 1) return fail(SBV_INVALID_ARGUMENT, "threads must be at least 1");
  *out = nullptr;
  return guarded([&] {
    auto* r = new sbv_result;
    try {
      r->run = sbv::run_experiment(s->scenario, command, sbv::RunOptions{threads});
      r->report = r->run.report.to_json().dump(2) + "\n";
      for (const auto& [name, data] : r->run.artifacts) r->artifacts.emplace_back(name, data);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

const char* sbv_result_report(const sbv_result* r) { return r ? r->report.c_str() : nullptr; }

int sbv_result_passed(const sbv_result* r) { return r && r->run.report.all_pass() ? 1 : 0; }

int sbv_result_exit_code(const sbv_result* r) {
  return r ? sbv::exit_code(r->run.report) : sbv::exit_code(sbv::ErrorCode::kInvalidArgument);
}

size_t sbv_result_artifact_count(const sbv_result* r) { return r ? r->artifacts.size() : 0; }

const char* sbv_result_artifact_name(const sbv_result* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].first.c_str() : nullptr;
}

const char* sbv_result_artifact_data(const sbv_result* r, size_t i, size_t* size) {
  if (!r || i >= r->artifacts.size()) return nullptr;
  if (size) *size = r->artifacts[i].second.size();
  return r->artifacts[i].second.c_str();
}

sbv_status sbv_result_write(const sbv_result* r, const char* dir) {
  if (!r || !dir) return fail(SBV_INVALID_ARGUMENT, "null argument");
  return guarded([&] { sbv::write_run(dir, r->run.report, r->run.artifacts); });
}

void sbv_result_free(sbv_result* r) { delete r; }

sbv_status sbv_merge_pair(const sbv_ball* a, const sbv_ball* b, sbv_ball* out) {
  if (!a || !b || !out) return fail(SBV_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = from_ball(sbv::merge_pair(to_ball(*a), to_ball(*b), a->id)); });
}

sbv_status sbv_construction_active(const sbv_ball* balls, size_t n, double t, sbv_ball* out,
                                   size_t cap, size_t* count) {
  if ((!balls && n) || (!out && cap) || !count) return fail(SBV_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<sbv::Ball> in;
    in.reserve(n);
    for (size_t k = 0; k < n; ++k) in.push_back(to_ball(balls[k]));
    auto act = sbv::run_construction(in, t).active(t);
    *count = act.size();
    for (size_t k = 0; k < act.size() && k < cap; ++k) out[k] = from_ball(act[k]);
  });
}

}  // extern "C"
