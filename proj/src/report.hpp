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

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace sbv {

inline constexpr const char* kVersion = "0.1.0";

// One checked inequality value <= bound. ratio = value / bound, with 0/0 = 0
// and x/0 = inf for x > 0; pass iff ratio <= 1 + slack.
struct ReportEntry {
  std::string name;
  std::string tag;  // short label of the inequality checked
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double slack = 0.0;
  bool pass = true;
};

class Report {
 public:
  Report() = default;
  Report(std::string command, std::string scenario, std::string scenario_hash, uint64_t seed,
         nlohmann::json params);

  const ReportEntry& check(const std::string& name, const std::string& tag, double value,
                           double bound, double slack = 0.0);
  void measure(const std::string& name, double value) { measurements_[name] = number(value); }
  void measure(const std::string& name, nlohmann::json value) { measurements_[name] = std::move(value); }
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void fail(const std::string& stage, int code, const std::string& message);

  const std::vector<ReportEntry>& entries() const { return entries_; }
  const nlohmann::json& measurements() const { return measurements_; }
  bool failed() const { return failed_; }
  int error_code() const { return error_code_; }
  const std::string& command() const { return command_; }
  bool all_pass() const;

  // Canonical, sorted-key JSON; no wall-clock data.
  nlohmann::json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }

  // Finite numbers as is, infinities as "inf" / "-inf", NaN as "nan".
  static nlohmann::json number(double v);

 private:
  std::string command_, scenario_, hash_;
  uint64_t seed_ = 0;
  nlohmann::json params_;
  std::vector<ReportEntry> entries_;
  nlohmann::json measurements_ = nlohmann::json::object();
  std::vector<std::string> notes_;
  bool failed_ = false;
  int error_code_ = 0;
  std::string error_stage_, error_message_;
};

// Writes every artifact and report.json into dir (created if needed), plus
// a FAILED marker when the run failed. One writer per run directory.
void write_run(const std::string& dir, const Report& report,
               const std::map<std::string, std::string>& artifacts);

}  // namespace sbv
