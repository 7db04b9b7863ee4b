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


// Criteria 1-3: ball construction invariants, the time-integrated boundary
// profile, and the radial fill constant.

#include <cmath>
#include <numbers>
#include <random>

#include "ball_construction.hpp"
#include "common.hpp"
#include "oracles.hpp"
#include "scenario.hpp"
#include "sobolev_approx_2d.hpp"

namespace sbv::acceptance {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> query_times(const ConstructionTrace& tr, double t_end, std::mt19937_64& g) {
  std::vector<double> ts{0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, t_end};
  auto ev = tr.event_times();
  for (size_t k = 0; k + 1 < ev.size(); ++k)
    if (ev[k + 1] > ev[k]) ts.push_back(0.5 * (ev[k] + ev[k + 1]));
  for (int k = 0; k < 10; ++k) ts.push_back(oracle::uniform(g, 0, t_end));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  // Keep away from event times, where the family is mid-merge.
  std::vector<double> out;
  for (double t : ts) {
    bool near = false;
    for (double e : ev) near |= std::abs(t - e) < 1e-9;
    if (!near) out.push_back(t);
  }
  return out;
}

// Drift bound between every pair of query times for lineages alive at both.
int drift_violations(const ConstructionTrace& tr, const std::vector<double>& ts) {
  int bad = 0;
  for (size_t a = 0; a < ts.size(); ++a) {
    auto fa = tr.active(ts[a]);
    auto la = tr.active_labels(ts[a]);
    for (size_t b = a + 1; b < ts.size(); ++b) {
      auto fb = tr.active(ts[b]);
      auto lb = tr.active_labels(ts[b]);
      for (size_t i = 0; i < fa.size(); ++i)
        for (size_t j = 0; j < fb.size(); ++j) {
          if (la[i] != lb[j]) continue;
          if (!(ts[b] < tr.collapse_time(la[i]))) continue;
          double move = distance(fa[i].center, fb[j].center);
          double room = fb[j].radius - std::exp(ts[b] - ts[a]) * fa[i].radius;
          if (move > room + 1e-9 * std::max(1.0, fb[j].radius)) ++bad;
        }
    }
  }
  return bad;
}

// A ball containing b: radius grown by up to 100%, center shifted inside the slack.
Ball superset(const Ball& b, std::mt19937_64& g) {
  double r = b.radius * (1 + oracle::uniform(g, 0.05, 1.0));
  double shift = oracle::uniform(g, 0, 1) * (r - b.radius), ang = oracle::uniform(g, 0, 2 * kPi);
  return {b.center + Vec2{std::cos(ang), std::sin(ang)} * shift, r, b.id};
}

}  // namespace

Outcome criterion_balls(int) {
  Tally t;
  const double T = 3.0;
  uint64_t events_total = 0;
  nlohmann::json hashes = nlohmann::json::array();
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 g = seeded_rng(static_cast<uint64_t>(trial), 1);
    const int n = 1 + static_cast<int>(g() % 50);
    auto fam = oracle::random_family(g, n);
    auto tr = run_construction(fam, T);
    const std::string tag = "family " + std::to_string(trial) + ": ";
    auto ts = query_times(tr, T, g);
    for (const auto& b : tr.initial_balls())
      t.expect(oracle::disk_in_union(b, tr.active(0.0)), tag + "nesting: initial ball outside the union at 0");
    for (size_t k = 0; k < ts.size(); ++k) {
      auto act = tr.active(ts[k]);
      t.expect(oracle::radii_defect(tr, ts[k]) <= 1e-9, tag + "sum of radii");
      t.expect(oracle::worst_gap(act) > -1e-9, tag + "overlapping active balls");
      if (k > 0)
        t.expect(oracle::union_in_union(tr.active(ts[k - 1]), act, g, 200), tag + "nesting: union shrank");
    }
    t.expect(drift_violations(tr, ts) == 0, tag + "center drift");

    // One ball replaced by a superset.
    auto big = fam;
    const size_t i = g() % fam.size();
    big[i] = superset(fam[i], g);
    auto tb = run_construction(big, T);
    for (const auto& [id, c] : tr.collapse_times())
      t.expect(tb.collapse_time(id) <= c + 1e-9, tag + "superset: collapse time increased");
    for (double s : ts)
      t.expect(oracle::union_in_union(tr.active(s), tb.active(s), g, 200), tag + "superset: union shrank");

    // Prefixes of the family, every fifth trial.
    if (trial % 5 == 0) {
      auto traces = truncated_countable_construction(fam, fam.size(), T);
      for (size_t N = 1; N < traces.size(); ++N) {
        for (const auto& [id, c] : traces[N - 1].collapse_times())
          t.expect(traces[N].collapse_time(id) <= c + 1e-9, tag + "prefix: collapse time increased");
        for (double s : {0.5, 1.5, T})
          t.expect(oracle::union_in_union(traces[N - 1].active(s), traces[N].active(s), g, 100),
                   tag + "prefix: union shrank");
      }
    }
    events_total += tr.events().size();
    hashes.push_back(hex64(fnv1a64(tr.events_csv() + tb.events_csv())));
  }

  // Two-ball merge against fixed-step growth.
  double worst = 0;
  for (auto pair : {std::vector<Ball>{{{0, 0}, 1, 0}, {{3, 0}, 1, 1}},
                    std::vector<Ball>{{{0, 0}, 1, 0}, {{4, 0}, 0.5, 1}}}) {
    auto exact = run_construction(pair, 1.0).active(1.0);
    auto step = oracle::stepping_oracle(pair, 1.0, 100000);
    t.expect(exact.size() == 1 && step.size() == 1, "two-ball merge did not happen by t = 1");
    if (exact.size() != 1 || step.size() != 1) continue;
    double rel = std::abs(exact[0].radius - step[0].radius) / step[0].radius;
    double drift = distance(exact[0].center, step[0].center) / step[0].radius;
    worst = std::max({worst, rel, drift});
    t.expect(rel <= 1e-6, "two-ball radius at t = 1");
    t.expect(drift <= 1e-6, "two-ball center at t = 1");
  }
  t.record("events", events_total);
  t.record("hashes", hashes);
  t.record("merge_error", worst);
  return t.finish("100 families, " + std::to_string(events_total) + " merges; two-ball error " + fmt(worst));
}

Outcome criterion_fubini(int) {
  Tally t;
  double worst = 0;
  nlohmann::json rows = nlohmann::json::array();
  // Mass of bump(|x| / w), w = 1: 2 pi \int_0^1 bump(s) s ds by the midpoint rule.
  double unit_mass = 0;
  {
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      double s = (k + 0.5) / n;
      unit_mass += oracle::bump(s) * s / n;
    }
    unit_mass *= 2 * kPi;
  }
  const Grid2D grid{{-0.5, -0.5}, 0.005, 401, 401};
  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 g = seeded_rng(static_cast<uint64_t>(trial), 2);
    const int n = 1 + static_cast<int>(g() % 20);
    auto fam = oracle::random_family(g, n);
    Vec2 c{oracle::uniform(g, 0.35, 0.65), oracle::uniform(g, 0.35, 0.65)};
    double w = oracle::uniform(g, 0.1, 0.3);
    auto f = [&](Vec2 x) { return oracle::bump(distance(x, c) / w); };
    const double mass = unit_mass * w * w;

    GridFunction2D fg{grid, {}};
    fg.values.reserve(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) fg.values.push_back(f(grid.node(k)));
    auto tr = run_construction(fam);
    double lib = integrated_boundary_profile(tr, fg);

    // Independent time integral on the analytic f, until every circle has
    // left the support.
    double ours = 0;
    const double dt = 1e-3;
    for (int step = 0;; ++step) {
      double s = (step + 0.5) * dt, sum = 0;
      bool any = false;
      for (const auto& b : tr.active(s)) {
        double d = distance(b.center, c);
        if (d + w <= b.radius || d - w >= b.radius) continue;
        any = true;
        double ring = 0;
        const int m = 512;
        for (int k = 0; k < m; ++k) {
          double a = 2 * kPi * (k + 0.5) / m;
          ring += f(b.center + Vec2{std::cos(a), std::sin(a)} * b.radius);
        }
        sum += b.radius * ring * (2 * kPi * b.radius / m);
      }
      ours += sum * dt;
      bool settled = true;
      for (const auto& b : tr.active(s)) settled &= distance(b.center, c) + w <= b.radius;
      if (!any && (settled || s > 40)) break;
    }
    worst = std::max(worst, std::max(lib, ours) / mass);
    const std::string tag = "instance " + std::to_string(trial) + ": ";
    t.expect(lib <= mass * 1.01, tag + "library profile integral above the mass");
    t.expect(ours <= mass * 1.01, tag + "oracle profile integral above the mass");
    t.expect(std::abs(lib - ours) <= 0.02 * mass, tag + "library and oracle integrals disagree");
    rows.push_back({lib, ours, mass});
  }
  t.record("rows", rows);
  return t.finish("20 instances, largest integral / mass " + fmt(worst, 6));
}

Outcome criterion_radial_fill(int) {
  Tally t;
  double worst_q = 0, worst_c = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (double p : {1.0, 2.0, 4.0})
    for (int trial = 0; trial < 20; ++trial) {
      std::mt19937_64 g = seeded_rng(static_cast<uint64_t>(trial) + 100 * static_cast<uint64_t>(p), 3);
      const int M = 16 + static_cast<int>(g() % 112);
      // Smooth part plus noise.
      std::vector<double> tr;
      double a1 = oracle::uniform(g, -1, 1), a3 = oracle::uniform(g, -1, 1), noise = oracle::uniform(g, 0, 0.5);
      for (int k = 0; k < M; ++k) {
        double th = 2 * kPi * k / M;
        tr.push_back(a1 * std::cos(th) + a3 * std::sin(3 * th) + noise * oracle::uniform(g, -1, 1));
      }
      Ball b{{oracle::uniform(g, -1, 1), oracle::uniform(g, -1, 1)}, oracle::uniform(g, 0.05, 2), 0};
      auto patch = radial_fill_from_trace(b, tr, p);
      double e = oracle::polar_energy(patch, p, 100, 2048);
      double boundary = oracle::trace_energy(tr, b.radius, p);
      double q = std::abs(patch.patch_energy - e) / e;
      // boundary already carries the factor r.
      double c = e / (radial_fill_constant(p) * boundary);
      worst_q = std::max(worst_q, q);
      worst_c = std::max(worst_c, c);
      const std::string tag = "p = " + fmt(p) + ", trace " + std::to_string(trial) + ": ";
      t.expect(q <= 0.02, tag + "patch energy against the polar oracle");
      t.expect(c <= 1.02, tag + "fill constant exceeded");
      t.expect(std::abs(patch.boundary_energy - boundary) <= 1e-9 * std::max(1.0, boundary),
               tag + "boundary energy against direct summation");
      rows.push_back({patch.patch_energy, e, boundary});
    }

  std::vector<double> cosine;
  for (int k = 0; k < 256; ++k) cosine.push_back(std::cos(2 * kPi * k / 256));
  auto lin = radial_fill_from_trace({{0, 0}, 1, 0}, cosine, 2);
  double e = oracle::polar_energy(lin, 2);
  double lin_err = std::abs(lin.patch_energy - e) / e;
  t.expect(lin_err <= 1e-4, "linear trace against the polar oracle");
  t.record("rows", rows);
  t.record("linear", {lin.patch_energy, e});
  return t.finish("60 traces, worst quadrature gap " + fmt(worst_q) + ", worst energy / bound " +
                  fmt(worst_c) + "; linear trace gap " + fmt(lin_err));
}

}  // namespace sbv::acceptance
