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

#include "ball_construction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "errors.hpp"

namespace sbv {

Ball merge_pair(const Ball& b, const Ball& b2, int new_id) {
  double r = b.radius + b2.radius;
  if (!(r > 0)) throw DegenerateInput("merge_pair: total radius is zero");
  Vec2 c = b.center * (b.radius / r) + b2.center * (b2.radius / r);
  return Ball{c, r, new_id};
}

std::optional<double> next_collision_time(std::span<const Ball> family, double t_now) {
  if (family.size() < 2) return std::nullopt;
  double best = kInfinity;
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j) {
      double d = distance(family[i].center, family[j].center);
      double s = family[i].radius + family[j].radius;
      if (d < s * (1 - kTangencyTolerance))
        throw PreconditionViolation("next_collision_time: balls " +
                                    std::to_string(family[i].id) + " and " +
                                    std::to_string(family[j].id) + " overlap");
      best = std::min(best, t_now + std::max(0.0, std::log(d / s)));
    }
  return best;
}

double ConstructionTrace::collapse_time(int initial_id) const {
  auto it = collapse_.find(initial_id);
  if (it == collapse_.end())
    throw InvalidArgument("collapse_time: unknown ball id " + std::to_string(initial_id));
  return it->second;
}

std::vector<Ball> ConstructionTrace::active(double t) const {
  if (t < 0 || t > t_end_)
    throw InvalidArgument("active: time outside [0, t_end]");
  std::vector<Ball> out;
  for (const auto& n : nodes_)
    if (n.birth <= t && t < n.death) out.push_back({n.ball.center, n.base * std::exp(t), n.ball.id});
  return out;
}

std::vector<int> ConstructionTrace::active_labels(double t) const {
  std::vector<int> out;
  for (const auto& n : nodes_)
    if (n.birth <= t && t < n.death) out.push_back(n.label);
  return out;
}

std::vector<double> ConstructionTrace::event_times() const {
  std::vector<double> out;
  for (const auto& e : events_) out.push_back(e.time);
  return out;
}

std::string ConstructionTrace::events_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "time,consumed_ids,new_id,cx,cy,r\n";
  for (const auto& e : events_) {
    os << e.time << ',';
    for (size_t k = 0; k < e.consumed.size(); ++k) os << (k ? ";" : "") << e.consumed[k];
    os << ',' << e.produced.id << ',' << e.produced.center.x << ',' << e.produced.center.y
       << ',' << e.produced.radius << '\n';
  }
  return os.str();
}

namespace {

struct PairEvent {
  double time;
  size_t a, b;  // node indices, a < b
  bool operator>(const PairEvent& o) const {
    if (time != o.time) return time > o.time;
    if (a != o.a) return a > o.a;
    return b > o.b;
  }
};

}  // namespace

ConstructionTrace run_construction(std::span<const Ball> initial, double t_end) {
  if (!(t_end >= 0)) throw InvalidArgument("run_construction: t_end must be >= 0");
  ConstructionTrace tr;
  tr.t_end_ = t_end;
  int next_id = 0;
  for (const auto& b : initial) {
    if (!(b.radius >= 0) || !std::isfinite(b.radius))
      throw InvalidArgument("run_construction: invalid radius for ball " + std::to_string(b.id));
    if (tr.collapse_.count(b.id))
      throw InvalidArgument("run_construction: duplicate ball id " + std::to_string(b.id));
    if (b.radius == 0) {
      tr.notes_.push_back("dropped zero-radius ball " + std::to_string(b.id));
      continue;
    }
    next_id = std::max(next_id, b.id + 1);
    tr.initial_.push_back(b);
    tr.collapse_[b.id] = kInfinity;
  }
  std::sort(tr.initial_.begin(), tr.initial_.end(),
            [](const Ball& x, const Ball& y) { return x.id < y.id; });
  for (const auto& b : tr.initial_) tr.nodes_.push_back({b, 0.0, kInfinity, b.radius, b.id});

  auto& nodes = tr.nodes_;
  std::vector<size_t> alive;
  for (size_t k = 0; k < nodes.size(); ++k) alive.push_back(k);

  auto radius_at = [&](size_t k, double t) { return nodes[k].base * std::exp(t); };

  // Merge until closures are pairwise disjoint; returns indices of new nodes.
  auto resolve = [&](double t) {
    std::vector<size_t> created;
    for (;;) {
      bool merged = false;
      for (size_t ia = 0; ia < alive.size() && !merged; ++ia)
        for (size_t ib = ia + 1; ib < alive.size() && !merged; ++ib) {
          size_t a = alive[ia], b = alive[ib];
          Ball ba{nodes[a].ball.center, radius_at(a, t), nodes[a].ball.id};
          Ball bb{nodes[b].ball.center, radius_at(b, t), nodes[b].ball.id};
          if (!closures_intersect(ba, bb)) continue;
          Ball m = merge_pair(ba, bb, next_id++);
          nodes[a].death = t;
          nodes[b].death = t;
          int keep = std::min(nodes[a].label, nodes[b].label);
          int lost = std::max(nodes[a].label, nodes[b].label);
          tr.collapse_[lost] = t;
          tr.events_.push_back({t, {ba.id, bb.id}, m});
          nodes.push_back({m, t, kInfinity, m.radius * std::exp(-t), keep});
          size_t k = nodes.size() - 1;
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(ib));
          alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(ia));
          alive.push_back(k);  // ids increase with k, so `alive` stays id-sorted
          created.push_back(k);
          merged = true;
        }
      if (!merged) break;
    }
    std::vector<size_t> survivors;
    for (size_t k : created)
      if (nodes[k].death == kInfinity) survivors.push_back(k);
    return survivors;
  };

  std::priority_queue<PairEvent, std::vector<PairEvent>, std::greater<>> queue;
  auto push_pair = [&](size_t a, size_t b, double t_now) {
    if (a > b) std::swap(a, b);
    double d = distance(nodes[a].ball.center, nodes[b].ball.center);
    double s = nodes[a].base + nodes[b].base;
    double t = std::max(t_now, std::log(d / s));
    queue.push({t, a, b});
  };

  resolve(0.0);
  for (size_t i = 0; i < alive.size(); ++i)
    for (size_t j = i + 1; j < alive.size(); ++j) push_pair(alive[i], alive[j], 0.0);

  double t_last = 0.0;
  while (!queue.empty()) {
    PairEvent ev = queue.top();
    queue.pop();
    if (nodes[ev.a].death != kInfinity || nodes[ev.b].death != kInfinity) continue;
    if (ev.time > t_end) break;
    double t = ev.time;
    if (t <= t_last * (1 + kTangencyTolerance)) t = t_last;
    t_last = t;
    auto fresh = resolve(t);
    for (size_t k : fresh)
      for (size_t other : alive)
        if (other != k) push_pair(k, other, t);
  }
  return tr;
}

std::vector<ConstructionTrace> truncated_countable_construction(std::span<const Ball> balls,
                                                                size_t n_max, double t_end) {
  std::vector<ConstructionTrace> out;
  size_t n = std::min(n_max, balls.size());
  double total = 0;
  for (size_t k = 0; k < n; ++k) total += balls[k].radius;
  if (!std::isfinite(total))
    throw InvalidArgument("truncated_countable_construction: radii sum is not finite");
  out.reserve(n);
  for (size_t k = 1; k <= n; ++k) out.push_back(run_construction(balls.first(k), t_end));
  return out;
}

double circle_integral(const GridFunction2D& f, Vec2 center, double radius, int samples) {
  double sum = 0;
  for (int k = 0; k < samples; ++k) {
    double phi = 2 * std::numbers::pi * (k + 0.5) / samples;
    sum += f({center.x + radius * std::cos(phi), center.y + radius * std::sin(phi)});
  }
  return sum * 2 * std::numbers::pi * radius / samples;
}

namespace {

double profile_value(const ConstructionTrace& trace, const GridFunction2D& f, double t,
                     int samples) {
  double v = 0;
  for (const auto& b : trace.active(t)) v += b.radius * circle_integral(f, b.center, b.radius, samples);
  return v;
}

void require_nonnegative(const GridFunction2D& f) {
  for (double v : f.values)
    if (v < 0 || std::isnan(v)) throw InvalidArgument("boundary profile: f must be nonnegative");
}

}  // namespace

std::vector<ProfilePoint> boundary_energy_profile(const ConstructionTrace& trace,
                                                  const GridFunction2D& f,
                                                  std::span<const double> times,
                                                  int samples_per_circle) {
  require_nonnegative(f);
  auto ev = trace.event_times();
  std::vector<ProfilePoint> out;
  for (double t : times) {
    for (double e : ev)
      if (std::abs(t - e) < 1e-9) t = e + 1e-9;
    out.push_back({t, profile_value(trace, f, t, samples_per_circle)});
  }
  return out;
}

double integrated_boundary_profile(const ConstructionTrace& trace, const GridFunction2D& f,
                                   int time_steps, int samples_per_circle) {
  require_nonnegative(f);
  if (trace.initial_balls().empty()) return 0.0;
  auto ev = trace.event_times();
  double t_last = ev.empty() ? 0.0 : ev.back();
  // Each surviving ball eventually contains the support box of f.
  const Grid2D& g = f.grid;
  const Vec2 corners[4] = {g.origin, {g.xmax(), g.origin.y}, {g.origin.x, g.ymax()},
                           {g.xmax(), g.ymax()}};
  double t_stop = t_last;
  double horizon = std::min(trace.t_end(), 1e3);
  for (const auto& b : trace.active(std::min(t_last, horizon))) {
    double far = 0;
    for (auto c : corners) far = std::max(far, distance(c, b.center));
    double base = b.radius * std::exp(-std::min(t_last, horizon));
    t_stop = std::max(t_stop, std::log(far / base));
  }
  t_stop = std::min(t_stop, horizon);

  std::vector<double> breaks = {0.0};
  for (double e : ev)
    if (e > breaks.back() && e < t_stop) breaks.push_back(e);
  breaks.push_back(t_stop);
  double total = 0;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    double a = breaks[k], b = breaks[k + 1];
    if (b <= a) continue;
    int n = std::max(8, static_cast<int>(std::ceil(time_steps * (b - a) / t_stop)));
    double dt = (b - a) / n;
    for (int i = 0; i < n; ++i)
      total += dt * profile_value(trace, f, a + (i + 0.5) * dt, samples_per_circle);
  }
  return total;
}

}  // namespace sbv
