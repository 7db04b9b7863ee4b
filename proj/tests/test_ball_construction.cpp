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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ball_construction.hpp"
#include "errors.hpp"
#include "oracles.hpp"

using namespace sbv;
using doctest::Approx;

TEST_CASE("merge_pair weights centers by radius") {
  Ball m = merge_pair({{0, 0}, 1, 0}, {{2, 0}, 1, 1});
  CHECK(m.center.x == Approx(1.0));
  CHECK(m.center.y == Approx(0.0));
  CHECK(m.radius == Approx(2.0));

  m = merge_pair({{0, 0}, 2, 0}, {{3, 0}, 1, 1});
  CHECK(m.center.x == Approx(1.0));
  CHECK(m.radius == Approx(3.0));

  Ball a{{0, 0}, 1, 0}, b{{1, 0}, 1, 1};
  m = merge_pair(a, b);
  CHECK(m.center.x == Approx(0.5));
  CHECK(m.radius == Approx(2.0));
  CHECK(ball_contains(m, a));
  CHECK(ball_contains(m, b));

  CHECK_THROWS_AS(merge_pair({{0, 0}, 0, 0}, {{1, 0}, 0, 1}), DegenerateInput);
}

TEST_CASE("next_collision_time against bisection") {
  std::vector<Ball> f{{{0, 0}, 1, 0}, {{4, 0}, 1, 1}};
  auto t = next_collision_time(f, 0.0);
  REQUIRE(t.has_value());
  CHECK(*t == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(*t == Approx(oracle::bisect_contact(f[0], f[1])).epsilon(1e-12));

  std::vector<Ball> tangent{{{0, 0}, 1, 0}, {{2, 0}, 1, 1}};
  CHECK(*next_collision_time(tangent, 0.0) == Approx(0.0));

  std::vector<Ball> single{{{0, 0}, 1, 0}};
  CHECK_FALSE(next_collision_time(single, 0.0).has_value());

  std::vector<Ball> overlap{{{0, 0}, 1, 0}, {{1, 0}, 1, 1}};
  CHECK_THROWS_AS(next_collision_time(overlap, 0.0), PreconditionViolation);
}

TEST_CASE("run_construction closed forms") {
  std::vector<Ball> one{{{0, 0}, 1, 0}};
  auto a = run_construction(one, std::log(3.0)).active(std::log(3.0));
  REQUIRE(a.size() == 1);
  CHECK(a[0].radius == Approx(3.0));

  std::vector<Ball> two{{{0, 0}, 1, 0}, {{4, 0}, 1, 1}};
  auto tr = run_construction(two, 1.0);
  REQUIRE(tr.events().size() == 1);
  CHECK(tr.events()[0].time == Approx(std::log(2.0)));
  CHECK(tr.events()[0].produced.radius == Approx(4.0));
  CHECK(tr.events()[0].produced.center.x == Approx(2.0));
  auto end = tr.active(1.0);
  REQUIRE(end.size() == 1);
  CHECK(end[0].radius == Approx(2 * std::numbers::e).epsilon(1e-12));

  auto step = oracle::stepping_oracle(two, 1.0, 100000);
  REQUIRE(step.size() == 1);
  CHECK(std::abs(step[0].radius - end[0].radius) / end[0].radius <= 1e-6);
  CHECK(step[0].center.x == Approx(end[0].center.x));

  std::vector<Ball> far{{{0, 0}, 1, 0}, {{100, 0}, 2, 1}, {{0, 100}, 3, 2}};
  auto f = run_construction(far).active(std::log(2.0));
  CHECK(oracle::sum_radii(f) == Approx(12.0));
}

TEST_CASE("zero-radius balls are dropped") {
  std::vector<Ball> f{{{0, 0}, 1, 0}, {{5, 5}, 0, 1}};
  auto tr = run_construction(f, 1.0);
  CHECK(tr.initial_balls().size() == 1);
  CHECK_FALSE(tr.notes().empty());
}

TEST_CASE("simultaneous contacts merge in id order at one time") {
  std::vector<Ball> f{{{-4, 0}, 1, 0}, {{0, 0}, 1, 1}, {{4, 0}, 1, 2}};
  auto tr = run_construction(f);
  REQUIRE(tr.events().size() == 2);
  CHECK(tr.events()[0].time == Approx(std::log(2.0)));
  CHECK(tr.events()[0].consumed == std::vector<int>{0, 1});
  CHECK(tr.events()[1].time == tr.events()[0].time);
  CHECK(tr.active(10.0).size() == 1);
}

TEST_CASE("truncated countable construction") {
  std::vector<Ball> base{{{0, 0}, 1, 0}, {{10, 0}, 1, 1}};

  SUBCASE("a far ball leaves earlier events unchanged") {
    auto f = base;
    f.push_back({{1000, 1000}, 1, 2});
    auto traces = truncated_countable_construction(f, 3, 3.0);
    REQUIRE(traces.size() == 3);
    REQUIRE(traces[1].events().size() == traces[2].events().size());
    for (size_t k = 0; k < traces[1].events().size(); ++k)
      CHECK(traces[1].events()[k].time == traces[2].events()[k].time);
  }

  SUBCASE("a ball in between does not delay collapses") {
    auto f = base;
    f.push_back({{5, 0}, 0.5, 2});
    auto traces = truncated_countable_construction(f, 3, 5.0);
    for (int id : {0, 1})
      CHECK(traces[2].collapse_time(id) <= traces[1].collapse_time(id));
    CHECK(traces[1].collapse_time(1) == Approx(std::log(5.0)));
    CHECK(traces[2].collapse_time(1) == Approx(std::log(10.0 / 3.0)));
  }

  SUBCASE("zero radii pad without effect") {
    auto f = base;
    for (int k = 0; k < 5; ++k) f.push_back({{3.0 * k, 7}, 0, 2 + k});
    auto traces = truncated_countable_construction(f, f.size(), 5.0);
    for (const auto& tr : traces) {
      if (tr.initial_balls().size() < 2) continue;
      CHECK(tr.events_csv() == traces[1].events_csv());
    }
  }

  SUBCASE("sum of radii is at most e^t times the total") {
    std::mt19937_64 g(3);
    auto fam = oracle::random_family(g, 30);
    auto traces = truncated_countable_construction(fam, 30, 2.0);
    double total = oracle::sum_radii(fam);
    for (const auto& tr : traces)
      for (double t : {0.0, 0.5, 1.0, 2.0})
        CHECK(oracle::sum_radii(tr.active(t)) <= std::exp(t) * total * (1 + 1e-9));
  }
}

TEST_CASE("invariants on random families") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto fam = oracle::random_family(g, 5 + trial * 2);
    auto tr = run_construction(fam, 3.0);
    std::vector<double> times{0.0, 0.1, 0.5, 1.0, 2.0, 3.0};
    for (double t : tr.event_times()) times.push_back(t + 1e-7);
    std::sort(times.begin(), times.end());
    for (size_t k = 0; k < times.size(); ++k) {
      double t = times[k];
      if (t > 3.0) continue;
      CHECK(oracle::radii_defect(tr, t) <= 1e-9);
      CHECK(oracle::worst_gap(tr.active(t)) > -1e-9);
      if (k > 0) CHECK(oracle::union_in_union(tr.active(times[k - 1]), tr.active(t), g, 50));
    }
    for (const auto& b : tr.initial_balls()) CHECK(oracle::disk_in_union(b, tr.active(0.0)));
    auto ev = tr.event_times();
    CHECK(std::is_sorted(ev.begin(), ev.end()));
  }
}

TEST_CASE("boundary profile") {
  Grid2D grid{{-50, -50}, 1.0, 101, 101};
  GridFunction2D zero{grid, std::vector<double>(grid.size(), 0.0)};
  GridFunction2D one{grid, std::vector<double>(grid.size(), 1.0)};
  std::vector<Ball> f{{{0, 0}, 0.5, 0}};
  auto tr = run_construction(f, 2.0);
  std::vector<double> times{0.0, 0.7, 1.5};
  for (const auto& pt : boundary_energy_profile(tr, zero, times)) CHECK(pt.value == 0.0);
  for (const auto& pt : boundary_energy_profile(tr, one, times)) {
    double r = 0.5 * std::exp(pt.time);
    CHECK(pt.value == Approx(2 * std::numbers::pi * r * r).epsilon(1e-9));
  }
}

TEST_CASE("time-integrated profile of a unit-mass bump") {
  const double w = 0.3;
  auto shape = [&](Vec2 x) { return oracle::bump(norm(x - Vec2{0.5, 0.5}) / w); };
  double mass = oracle::quad2d(shape, 0.5 - w, 0.5 + w, 0.5 - w, 0.5 + w, 2000);
  Grid2D grid{{0, 0}, 0.005, 201, 201};
  GridFunction2D f{grid, {}};
  for (size_t k = 0; k < grid.size(); ++k) f.values.push_back(shape(grid.node(k)) / mass);
  std::vector<Ball> one{{{0.45, 0.52}, 0.01, 0}};
  auto tr = run_construction(one);
  double integral = integrated_boundary_profile(tr, f);
  CHECK(integral <= 1.0 * 1.01);
  CHECK(integral >= 0.98);
}
