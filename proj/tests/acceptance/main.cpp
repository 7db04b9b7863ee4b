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

// Acceptance suite: one PASS/FAIL line per criterion. Every criterion also
// returns a digest of its measured numbers; the last criterion reruns the
// others and compares digests byte for byte.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

using namespace sbv;
using namespace sbv::acceptance;

namespace {

// Reruns every criterion with three threads, and the ones whose work does
// not depend on the thread count once more with one, against the first run.
Outcome determinism(const std::vector<std::pair<int, Criterion>>& suite,
                    const std::map<int, std::string>& first) {
  Tally t;
  int reruns = 0;
  for (const auto& [k, fn] : suite) {
    auto it = first.find(k);
    if (it == first.end()) continue;
    std::vector<int> counts{3};
    if (k != 4) counts.push_back(1);
    for (int threads : counts) {
      Outcome again = fn(threads);
      ++reruns;
      t.expect(!again.digest.empty() && again.digest == it->second,
               "criterion " + std::to_string(k) + " differs with " + std::to_string(threads) + " thread(s)");
    }
  }
  t.expect(reruns > 0, "no criterion to rerun");
  return t.finish(std::to_string(reruns) + " reruns byte-identical to the first run");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto wanted = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };

  const std::vector<std::pair<int, Criterion>> suite = criteria();
  std::map<int, std::string> digests;
  bool all = true;
  for (const auto& [k, fn] : suite) {
    if (!wanted(k)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn(1);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    digests[k] = o.digest;
    all &= o.pass;
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  if (wanted(9)) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = determinism(suite, digests);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all &= o.pass;
    std::printf("%s criterion 9: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
  }
  return all ? 0 : 1;
}
