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

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sbv::acceptance {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string digest;
};

using Criterion = std::function<Outcome(int threads)>;

// Collects checks for one criterion; the first failure is kept for the
// summary line, every recorded number goes into the digest.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  void record(const std::string& key, nlohmann::json value) { digest_[key] = std::move(value); }
  int failures() const { return failures_; }

  Outcome finish(const std::string& summary) const {
    Outcome o;
    o.pass = failures_ == 0;
    o.detail = summary + "; " + std::to_string(checks_ - failures_) + "/" + std::to_string(checks_) +
               " checks";
    if (!o.pass) o.detail += "; first failure: " + first_;
    o.digest = digest_.dump();
    return o;
  }

 private:
  int checks_ = 0, failures_ = 0;
  std::string first_;
  nlohmann::json digest_ = nlohmann::json::object();
};

// One constant across scenarios: the maximum over all of them stays within
// a factor 2 of the maximum over the first half.
inline bool stable_within_factor_2(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  double all = 0, half = 0;
  for (size_t k = 0; k < v.size(); ++k) {
    all = std::max(all, v[k]);
    if (k < v.size() / 2) half = std::max(half, v[k]);
  }
  return all <= 2 * half || all == 0;
}

inline double max_of(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Outcome criterion_balls(int threads);
Outcome criterion_fubini(int threads);
Outcome criterion_radial_fill(int threads);
Outcome criterion_approx_2d(int threads);
Outcome criterion_approx_3d(int threads);
Outcome criterion_poincare(int threads);
Outcome criterion_optimality(int threads);
Outcome criterion_mumford_shah(int threads);

inline std::vector<std::pair<int, Criterion>> criteria() {
  return {{1, criterion_balls},     {2, criterion_fubini},     {3, criterion_radial_fill},
          {4, criterion_approx_2d}, {5, criterion_approx_3d},  {6, criterion_poincare},
          {7, criterion_optimality}, {8, criterion_mumford_shah}};
}

}  // namespace sbv::acceptance
