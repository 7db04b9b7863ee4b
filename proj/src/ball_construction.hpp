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

// Growth-and-merge construction for finite families of disks.
//
// Every active disk grows as r(t) = r(s) e^{t-s} about a fixed center.  When
// two closures touch they are replaced by one disk with the summed radius at
// the radius-weighted center, which contains both.  Because all radii share
// the growth factor, contact times have the closed form
// t = ln(|x_i - x_j| / (r_i(0) + r_j(0))) and the engine is exact.

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "grid.hpp"

namespace sbv {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Relative slack under which two closures count as touching.
inline constexpr double kTangencyTolerance = 1e-12;

struct Ball {
  Vec2 center;
  double radius = 0.0;
  int id = 0;
};

inline bool closures_intersect(const Ball& a, const Ball& b) {
  return distance(a.center, b.center) <= (a.radius + b.radius) * (1 + kTangencyTolerance);
}

// {x : |x - center| < radius + slack} contains the other ball.
inline bool ball_contains(const Ball& outer, const Ball& inner, double slack = 1e-12) {
  return distance(outer.center, inner.center) + inner.radius <= outer.radius + slack;
}

// Radius-weighted merge. Throws DegenerateInput if both radii vanish.
Ball merge_pair(const Ball& b, const Ball& b2, int new_id = -1);

// Earliest time >= t_now at which two balls of the family touch, or nullopt
// for fewer than two balls. Radii are taken at t_now. Throws
// PreconditionViolation if two closures already overlap beyond tangency.
std::optional<double> next_collision_time(std::span<const Ball> family, double t_now);

struct MergeEvent {
  double time = 0.0;
  std::vector<int> consumed;
  Ball produced;  // radius at `time`
};

class ConstructionTrace {
 public:
  ConstructionTrace() = default;

  const std::vector<Ball>& initial_balls() const { return initial_; }
  const std::vector<MergeEvent>& events() const { return events_; }
  // Keyed by initial ball id; +inf for lineages that survive to t_end.
  const std::map<int, double>& collapse_times() const { return collapse_; }
  double collapse_time(int initial_id) const;
  double t_end() const { return t_end_; }
  const std::vector<std::string>& notes() const { return notes_; }

  // Active family at time t, radii evaluated at t, sorted by id.
  // At an event time the post-merge family is returned.
  std::vector<Ball> active(double t) const;

  // Initial id whose lineage owns each active ball (the smallest one merged in).
  std::vector<int> active_labels(double t) const;

  size_t ball_record_count() const { return nodes_.size(); }

  // Sorted event times (with repetition for simultaneous merges).
  std::vector<double> event_times() const;

  // Event-log CSV: time,consumed_ids,new_id,cx,cy,r
  std::string events_csv() const;

 private:
  friend ConstructionTrace run_construction(std::span<const Ball>, double);

  struct Node {
    Ball ball;          // radius at birth
    double birth = 0.0;
    double death = kInfinity;
    double base = 0.0;  // radius extrapolated to t = 0
    int label = 0;
  };

  std::vector<Ball> initial_;
  std::vector<Node> nodes_;
  std::vector<MergeEvent> events_;
  std::map<int, double> collapse_;
  std::vector<std::string> notes_;
  double t_end_ = kInfinity;
};

// Runs the construction up to t_end (inclusive; +inf runs to a single ball).
// Zero-radius balls are dropped with a note; merged balls are numbered after
// the largest kept id. Initial overlaps are merged at t = 0; simultaneous
// contacts merge pairwise in ascending id order.
ConstructionTrace run_construction(std::span<const Ball> initial, double t_end = kInfinity);

// Traces of the prefixes {B_1..B_N} for N = 1..n_max (index N-1).
std::vector<ConstructionTrace> truncated_countable_construction(std::span<const Ball> balls,
                                                                size_t n_max,
                                                                double t_end = kInfinity);

struct ProfilePoint {
  double time = 0.0;
  double value = 0.0;
};

// sum_{active i} r_i(t) * \oint_{\partial B_i(t)} f dH^1 by uniform-angle
// quadrature. f must be nonnegative. Times that coincide with an event are
// nudged forward by 1e-9.
std::vector<ProfilePoint> boundary_energy_profile(const ConstructionTrace& trace,
                                                  const GridFunction2D& f,
                                                  std::span<const double> times,
                                                  int samples_per_circle = 256);

double circle_integral(const GridFunction2D& f, Vec2 center, double radius, int samples);

// Time integral of the boundary profile over [0, t_stop], where t_stop is
// the time after which every circle has left the support of f. Composite
// midpoint rule on each interval between events.
double integrated_boundary_profile(const ConstructionTrace& trace, const GridFunction2D& f,
                                   int time_steps = 4000, int samples_per_circle = 256);

}  // namespace sbv
