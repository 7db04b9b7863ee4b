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

// Scenario files: a domain, a function given as a sum of analytic terms
// and region constants (or a value grid), its jump geometry, and run
// parameters. Presets expand into ordinary scenario JSON before validation,
// so a preset scenario and its expansion hash the same.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ball_construction.hpp"
#include "cylinder_approx_3d.hpp"
#include "gsbv_model.hpp"

namespace sbv {

using Json = nlohmann::json;

// Positions are (x, y, 0) in 2D and (x1, x2, x3) in 3D.
using Point3 = std::array<double, 3>;

struct Term {
  enum class Kind { kConstant, kLinear, kSin, kBump, kCrack, kCrack3D };
  Kind kind = Kind::kConstant;
  double amplitude = 1.0;
  std::array<double, 4> coef{0, 0, 0, 0};  // linear: c0 + c1 x + c2 y + c3 z
  Point3 wave{0, 0, 0};                    // sin: amplitude sin(wave . x + phase)
  double phase = 0.0;
  Point3 center{0, 0, 0};
  double width = 0.1;                      // bump radius; crack decay normal to the cut
  double angle = 0.0;                      // crack direction in the plane
  double length = 0.1;
  Point3 axis_u{0, 1, 0}, axis_v{0, 0, 1}; // crack3d in-plane axes (unit)
  double length_v = 0.1;
  double eps_power = 0.0;                  // scaled by eps^q in eps families

  double operator()(const Point3& x) const;
};

struct RegionPiece {
  enum class Shape { kHalfspace, kBall, kBox, kCylinder };
  Shape shape = Shape::kHalfspace;
  Point3 normal{1, 0, 0};
  double offset = 0.0;      // halfspace n . x > offset
  Point3 center{0, 0, 0};
  double radius = 0.0;      // ball |x - c| < r
  Point3 lo{0, 0, 0}, hi{0, 0, 0};  // open box; cylinder uses lo[0], hi[0] as its x1 range
  double value = 0.0;
  bool contains(const Point3& x, int dim) const;
};

struct FunctionSpec {
  std::vector<Term> terms;
  std::vector<RegionPiece> regions;  // first match wins
  double default_value = 0.0;        // region value when no region matches
  std::vector<double> grid;          // optional node values on the S' lattice (2D only)

  double value(const Point3& x, int dim, double eps = 1.0) const;
};

struct RandomBalls {
  int count = 0;
  Vec2 lo{0, 0}, hi{1, 1};
  double r_min = 0.01, r_max = 0.1;
};

struct SweepSpec {
  CounterexampleKind kind = CounterexampleKind::kA;
  std::vector<double> h{0.05, 0.1, 0.2, 0.4};
  CounterexampleOptions options;
  double cover_factor = 0.25;  // cover radius = factor * h
};

struct Params {
  double p = 2.0;
  double T = 1.0;
  std::vector<double> T_sweep;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  double delta = 0.25;
  double lambda = 2.0;
  double cover_radius = 0.0;
  int n_times = 64;
  int samples_per_circle = 128;
  uint64_t seed = 1;
  double slack = 0.02;
  int slices = 64;
  double eta = 0.0;
  bool enforce_guard = true;
  double tolerance = 0.05;
};

struct Scenario {
  std::string name;
  int dim = 2;                   // 3 when an interval is given
  Domain2D domain;
  double a = 0.0, b = 1.0;       // interval I in 3D
  FunctionSpec function;
  std::vector<JumpCurve> curves;
  std::vector<Triangle3> surface;
  std::vector<Ball> balls;
  std::optional<RandomBalls> random_balls;
  std::optional<SweepSpec> sweep;
  std::optional<double> counterexample_h;  // single member of a counterexample family
  bool eps_family = false;       // ms-gamma: one function per eps
  Params params;
  Json canonical;                // validated scenario with every default written out
  uint64_t hash = 0;             // FNV-1a 64 of canonical.dump()

  PiecewiseFunction2D function_2d() const;
  Function3D function_3d(double eps = 1.0) const;
  std::vector<Ball> ball_family() const;  // explicit balls, else the seeded random family
};

// Expands presets, fills defaults and validates. Throws ValidationError
// listing every offending field path.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

// Applies --p, --T, ... style overrides (keys of Params plus "grid") and
// revalidates.
Scenario with_overrides(const Scenario& s, const Json& overrides);

// The preset's expansion, before user fields are merged over it.
Json expand_preset(const Json& preset);
std::vector<std::string> preset_names();

uint64_t fnv1a64(const std::string& bytes);
std::string hex64(uint64_t v);

// The one generator used for randomized scenarios; stream k of a seed.
std::mt19937_64 seeded_rng(uint64_t seed, uint64_t stream = 0);

}  // namespace sbv
