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


// Command-line front end. Talks to the library only through the C API.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbvapprox/sbvapprox.h"

namespace {

constexpr const char* kEnvPrefix = "SBVAPPROX_";

struct Overrides {
  std::optional<double> p, T, delta, grid, slack;
  std::optional<int> slices;
  std::optional<uint64_t> seed;
  std::string eps;  // comma separated
};

int report_status(sbv_status s) {
  std::cerr << "error (" << sbv_status_name(s) << "): " << sbv_last_error() << "\n";
  return sbv_exit_code_for_status(s);
}

nlohmann::json override_json(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (o.p) j["p"] = *o.p;
  if (o.T) j["T"] = *o.T;
  if (o.delta) j["delta"] = *o.delta;
  if (o.grid) j["grid"] = *o.grid;
  if (o.slack) j["slack"] = *o.slack;
  if (o.slices) j["slices"] = *o.slices;
  if (o.seed) j["seed"] = *o.seed;
  if (!o.eps.empty()) {
    nlohmann::json list = nlohmann::json::array();
    std::stringstream ss(o.eps);
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      list.push_back(v);
    }
    j["eps"] = list;
  }
  return j;
}

// Preset names may be given bare or as a JSON object with their options.
std::string preset_scenario(const std::string& preset) {
  nlohmann::json p = preset.starts_with("{") ? nlohmann::json::parse(preset) : nlohmann::json(preset);
  return nlohmann::json{{"preset", p}}.dump();
}

int run(const std::string& command, const std::string& scenario_path, const std::string& preset,
        const Overrides& o, const std::string& out, int threads) {
  sbv_scenario* s = nullptr;
  sbv_status st;
  if (!preset.empty()) {
    std::string text;
    try {
      text = preset_scenario(preset);
    } catch (const std::exception& e) {
      std::cerr << "error (validation): --preset is not a name or JSON object: " << e.what() << "\n";
      return 2;
    }
    st = sbv_scenario_parse(text.c_str(), &s);
  } else {
    st = sbv_scenario_load(scenario_path.c_str(), &s);
  }
  if (st != SBV_OK) return report_status(st);

  std::string ov;
  try {
    ov = override_json(o).dump();
  } catch (const std::exception&) {
    sbv_scenario_free(s);
    std::cerr << "error (validation): --eps expects a comma separated list of numbers\n";
    return 2;
  }
  if (ov != "{}" && (st = sbv_scenario_override(s, ov.c_str())) != SBV_OK) {
    sbv_scenario_free(s);
    return report_status(st);
  }

  auto t0 = std::chrono::steady_clock::now();
  sbv_result* r = nullptr;
  st = sbv_run(s, command.c_str(), threads, &r);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  sbv_scenario_free(s);
  if (st != SBV_OK) return report_status(st);

  int code = sbv_result_exit_code(r);
  if (out.empty()) {
    std::cout << sbv_result_report(r);
  } else {
    if ((st = sbv_result_write(r, out.c_str())) != SBV_OK) {
      sbv_result_free(r);
      return report_status(st);
    }
    nlohmann::json timing = {{"command", command}, {"threads", threads}, {"seconds", seconds}};
    std::ofstream(std::filesystem::path(out) / "timing.json") << timing.dump(2) << "\n";
    std::cerr << command << ": " << (code == 0 ? "pass" : "FAIL") << ", wrote " << out << "\n";
  }
  if (code != 0) {
    auto rep = nlohmann::json::parse(sbv_result_report(r));
    for (const auto& e : rep["entries"])
      if (!e["pass"].get<bool>())
        std::cerr << "  failed: " << e["tag"].get<std::string>() << " (" << e["name"].get<std::string>()
                  << "), ratio " << e["ratio"].dump() << "\n";
    if (rep.contains("error"))
      std::cerr << "  error in " << rep["error"]["stage"].get<std::string>() << ": "
                << rep["error"]["message"].get<std::string>() << "\n";
  }
  sbv_result_free(r);
  return code;
}

std::string env_name(const std::string& flag) {
  std::string s = kEnvPrefix;
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("sbvapprox ") + sbv_version() +
               ": approximation experiments for functions with small jump sets"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", sbv_version());

  std::string scenario_path, preset, out;
  Overrides o;
  double p = 0, T = 0, delta = 0, grid = 0, slack = 0;
  int slices = 0, threads = 1;
  uint64_t seed = 0;

  for (size_t i = 0; i < sbv_command_count(); ++i) {
    std::string name = sbv_command_name(i);
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto* scen = sub->add_option("--scenario", scenario_path, "scenario JSON file")
                     ->envname(env_name("scenario"));
    auto* pre = sub->add_option("--preset", preset, "built-in scenario: a name or a JSON object")
                    ->envname(env_name("preset"));
    scen->excludes(pre);
    sub->add_option("--out", out, "run directory (report to stdout when omitted)")->envname(env_name("out"));
    sub->add_option("--p", p, "integrability exponent")->envname(env_name("p"));
    sub->add_option("--T", T, "horizon")->envname(env_name("T"));
    sub->add_option("--eps", o.eps, "comma separated eps values")->envname(env_name("eps"));
    sub->add_option("--delta", delta, "energy tolerance")->envname(env_name("delta"));
    sub->add_option("--grid", grid, "lattice spacing")->envname(env_name("grid"));
    sub->add_option("--slices", slices, "number of x1 slices")->envname(env_name("slices"));
    sub->add_option("--seed", seed, "random seed")->envname(env_name("seed"));
    sub->add_option("--threads", threads, "worker threads")->envname(env_name("threads"))->check(CLI::PositiveNumber);
    sub->add_option("--slack", slack, "default relative slack of the checks")->envname(env_name("slack"));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* flag) { return sub->count(flag) > 0 || std::getenv(env_name(flag + 2).c_str()); };
  if (given("--p")) o.p = p;
  if (given("--T")) o.T = T;
  if (given("--delta")) o.delta = delta;
  if (given("--grid")) o.grid = grid;
  if (given("--slack")) o.slack = slack;
  if (given("--slices")) o.slices = slices;
  if (given("--seed")) o.seed = seed;
  if (scenario_path.empty() && preset.empty()) {
    std::cerr << "error (validation): one of --scenario or --preset is required\n";
    return 2;
  }
  return run(sub->get_name(), scenario_path, preset, o, out, threads);
}
