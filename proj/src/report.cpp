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

#include "report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "errors.hpp"

namespace sbv {

Report::Report(std::string command, std::string scenario, std::string scenario_hash,
               uint64_t seed, nlohmann::json params)
    : command_(std::move(command)),
      scenario_(std::move(scenario)),
      hash_(std::move(scenario_hash)),
      seed_(seed),
      params_(std::move(params)) {}

nlohmann::json Report::number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const ReportEntry& Report::check(const std::string& name, const std::string& tag, double value,
                                 double bound, double slack) {
  ReportEntry e;
  e.name = name;
  e.tag = tag;
  e.value = value;
  e.bound = bound;
  e.slack = slack;
  if (bound > 0) e.ratio = value / bound;
  else e.ratio = value > 0 ? INFINITY : 0.0;
  if (std::isnan(value) || std::isnan(bound)) e.ratio = NAN;
  e.pass = e.ratio <= 1 + slack;  // false for NaN
  entries_.push_back(e);
  return entries_.back();
}

void Report::fail(const std::string& stage, int code, const std::string& message) {
  failed_ = true;
  error_code_ = code;
  error_stage_ = stage;
  error_message_ = message;
}

bool Report::all_pass() const {
  if (failed_) return false;
  for (const auto& e : entries_)
    if (!e.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command_;
  j["provenance"] = {{"scenario", scenario_}, {"scenario_hash", hash_}, {"seed", seed_},
                     {"parameters", params_}, {"version", kVersion}};
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_)
    entries.push_back({{"name", e.name}, {"tag", e.tag}, {"value", number(e.value)},
                       {"bound", number(e.bound)}, {"ratio", number(e.ratio)},
                       {"slack", number(e.slack)}, {"pass", e.pass}});
  j["entries"] = entries;
  j["measurements"] = measurements_;
  j["notes"] = notes_;
  j["pass"] = all_pass();
  if (failed_)
    j["error"] = {{"stage", error_stage_}, {"code", error_code_}, {"message", error_message_}};
  return j;
}

void write_run(const std::string& dir, const Report& report,
               const std::map<std::string, std::string>& artifacts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + dir + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& text) {
    fs::path p = fs::path(dir) / name;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  };
  for (const auto& [name, text] : artifacts) put(name, text);
  put("report.json", report.dump());
  fs::path marker = fs::path(dir) / "FAILED";
  if (report.failed()) put("FAILED", report.to_json()["error"].dump(2) + "\n");
  else fs::remove(marker, ec);
}

}  // namespace sbv
