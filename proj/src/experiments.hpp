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

// Commands run on a validated scenario. Each returns a report plus text
// artifacts keyed by file name; nothing here touches the filesystem.

#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "report.hpp"
#include "scenario.hpp"

namespace sbv {

struct RunOptions {
  int threads = 1;
};

struct RunResult {
  Report report;
  std::map<std::string, std::string> artifacts;
};

std::vector<std::string> command_names();

// Throws ValidationError when the scenario does not fit the command. Module
// failures are caught, recorded in the report with their stage and the
// artifacts produced so far are kept.
RunResult run_experiment(const Scenario& s, const std::string& command,
                         const RunOptions& opt = {});

// 0 pass, 1 bound violation or refused hypothesis, 2 validation or i/o error,
// 3 internal error.
int exit_code(const Report& r);
int exit_code(ErrorCode c);

// Run-length encoding of a 0/1 mask as [value, count, value, count, ...].
nlohmann::json run_length(const std::vector<uint8_t>& mask);

}  // namespace sbv
