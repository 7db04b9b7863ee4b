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
#include <random>

#include "errors.hpp"
#include "gsbv_model.hpp"
#include "oracles.hpp"

using namespace sbv;
using doctest::Approx;

namespace {

Domain2D unit_square(double h = 0.01, double margin = 0.25) {
  Domain2D d;
  d.h = h;
  d.margin = margin;
  return d;
}

// Rectangle {x1 in (0, 1)} x {x2 = c} x (z0, z0 + L) as two triangles.
std::vector<Triangle3> patch_x2(double c, double z0, double L) {
  Vec3 a{0, c, z0}, b{1, c, z0}, e{1, c, z0 + L}, f{0, c, z0 + L};
  return {{a, b, e}, {a, e, f}};
}

bool covered(const std::vector<Ball>& balls, Vec2 p) {
  for (const auto& b : balls)
    if (distance(p, b.center) < b.radius) return true;
  return false;
}

}  // namespace

TEST_CASE("domain validation names the field") {
  Domain2D d = unit_square();
  d.margin = -1;
  try {
    d.validate();
    FAIL("expected an exception");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("margin") != std::string::npos);
  }
  d = unit_square();
  d.h = 0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
}

TEST_CASE("lattice weights add up to the areas") {
  Domain2D d = unit_square(0.05, 0.25);
  double s = 0, e = 0;
  for (double w : d.node_weights(Region::kS)) s += w;
  for (double w : d.node_weights(Region::kExtended)) e += w;
  CHECK(s == Approx(1.0).epsilon(1e-12));
  CHECK(e == Approx(2.25).epsilon(1e-12));

  Domain2D disk;
  disk.shape = DomainShape::kDisk;
  disk.radius = 1;
  disk.margin = 0.2;
  disk.h = 0.02;
  double c = 0;
  for (double w : disk.cell_weights(Region::kS)) c += w;
  CHECK(c == Approx(std::numbers::pi).epsilon(1e-4));
  CHECK(disk.area() == Approx(std::numbers::pi));
}

TEST_CASE("jump masses") {
  JumpCurve seg{{{0, 0.5}, {2, 0.5}}};
  CHECK(jump_mass({seg}) == Approx(2.0));

  const double L = 0.3;
  auto lateral = patch_x2(0.5, 0.2, L);
  CHECK(jump_mass(lateral, JumpWeight::kTransverse) == Approx(L));
  CHECK(jump_mass(lateral, JumpWeight::kTemporal) == Approx(0.0));

  std::vector<Triangle3> flat{{{0.5, 0, 0}, {0.5, 1, 0}, {0.5, 1, 1}}, {{0.5, 0, 0}, {0.5, 1, 1}, {0.5, 0, 1}}};
  CHECK(jump_mass(flat, JumpWeight::kTransverse) == Approx(0.0));
  CHECK(jump_mass(flat, JumpWeight::kTemporal) == Approx(1.0));
  CHECK(jump_mass(flat, JumpWeight::kFull) == Approx(1.0));
}

TEST_CASE("Dirichlet energies") {
  Domain2D d = unit_square(0.01);
  auto lin = PiecewiseFunction2D::sample(d, 2, [](Vec2 x) { return x.y; }, {});
  CHECK(dirichlet_energy(lin) == Approx(1.0).epsilon(1e-9));

  auto c = PiecewiseFunction2D::sample(d, 2, [](Vec2) { return 3.0; }, {});
  CHECK(dirichlet_energy(c) == 0.0);

  auto quad = PiecewiseFunction2D::sample(d, 2, [](Vec2 x) { return x.y * x.y; }, {});
  double oracle = oracle::quad2d([](Vec2 x) { return 4 * x.y * x.y; }, 0, 1, 0, 1, 1000);
  CHECK(oracle == Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(dirichlet_energy(quad) == Approx(oracle).epsilon(1e-4));
}

TEST_CASE("extension") {
  SUBCASE("constants stay constant") {
    Domain2D d = unit_square(0.05);
    auto u = PiecewiseFunction2D::sample(d, 2, [](Vec2) { return 2.0; }, {});
    auto ext = extend(u);
    for (double v : ext.U.values()) CHECK(v == 2.0);
    CHECK(ext.energy_ratio == 1.0);
  }

  SUBCASE("reflection of x2 keeps unit slope") {
    Domain2D d = unit_square(0.01, 0.5);
    auto u = PiecewiseFunction2D::sample(d, 2, [](Vec2 x) { return x.y; }, {});
    auto ext = extend(u);
    CHECK(dirichlet_energy(ext.U, Region::kExtended) == Approx(4.0).epsilon(1e-9));
    const auto& g = u.grid();
    size_t diff = 0;
    for (size_t k = 0; k < g.size(); ++k)
      if (d.in_S(g.node(k)) && ext.U.values()[k] != u.values()[k]) ++diff;
    CHECK(diff == 0);
  }

  SUBCASE("a crack ending on the boundary is mirrored within the margin") {
    for (double margin : {0.25, 0.4}) {
      Domain2D d = unit_square(0.01, margin);
      JumpCurve c{{{0.5, 0.503}, {1.0, 0.503}}};
      auto u = PiecewiseFunction2D::sample(d, 2, [](Vec2 x) { return x.y > 0.503 ? 1.0 : 0.0; }, {c});
      auto ext = extend(u);
      double want = 0.5 + std::min(margin, 0.5);
      CHECK(jump_mass(ext.U.curves()) == Approx(want).epsilon(1e-9));
      CHECK(ext.jump_ratio <= 2.0 + 1e-12);
    }
  }
}

TEST_CASE("jump curves are clipped to the domain") {
  Domain2D d = unit_square(0.01, 0.25);
  std::vector<JumpCurve> c{{{{0.5, 0.5}, {2.0, 0.5}}}};
  auto in = restrict_to_S(c, d);
  CHECK(jump_mass(in) == Approx(0.5));
}

TEST_CASE("vitali covers") {
  CHECK(vitali_cover({}, 0.1).empty());

  JumpCurve seg{{{0, 0}, {2, 0}}};
  auto balls = vitali_cover({seg}, 0.3);
  REQUIRE(balls.size() == 7);
  CHECK(oracle::sum_radii(balls) == Approx(2.1));
  CHECK(balls.front().center.x == Approx(0.1));
  for (size_t k = 1; k < balls.size(); ++k)
    CHECK(balls[k].center.x - balls[k - 1].center.x == Approx(0.3));
  for (int k = 0; k <= 1000; ++k) CHECK(covered(balls, {2.0 * k / 1000, 0}));

  const double l = 0.37;
  JumpCurve short_seg{{{0.1, 0.2}, {0.1 + l * 0.6, 0.2 + l * 0.8}}};
  auto half = vitali_cover({short_seg}, l / 2);
  CHECK(half.size() >= 2);
  CHECK(half.size() <= 3);
  for (int k = 0; k <= 1000; ++k)
    CHECK(covered(half, short_seg.points[0] + (short_seg.points[1] - short_seg.points[0]) * (k / 1000.0)));

  std::mt19937_64 g(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<JumpCurve> curves;
    double shortest = kInfinity;
    for (int s = 0; s < 4; ++s) {
      Vec2 a{oracle::uniform(g, 0, 1), oracle::uniform(g, 0, 1)};
      Vec2 b{oracle::uniform(g, 0, 1), oracle::uniform(g, 0, 1)};
      curves.push_back({{a, b}});
      shortest = std::min(shortest, distance(a, b));
    }
    auto cov = vitali_cover(curves, shortest * oracle::uniform(g, 0.2, 1.0));
    CHECK(oracle::sum_radii(cov) <= 3 * jump_mass(curves));
    for (const auto& c : curves)
      for (int k = 0; k <= 1000; ++k)
        CHECK(covered(cov, c.points[0] + (c.points[1] - c.points[0]) * (k / 1000.0)));
  }
}

TEST_CASE("sections of a surface") {
  auto lateral = patch_x2(0.5, 0.2, 0.3);
  auto sec = sections(lateral, 0.4);
  CHECK(jump_mass(sec) == Approx(0.3));
  CHECK(sections(lateral, 1.5).empty());
}

TEST_CASE("column energy is exact for piecewise-linear columns") {
  // Slope 2 left of the jump at 0.43, slope -1 right of it, on (0, 1).
  const int n = 20;
  const double delta = 1.0 / n;
  std::vector<double> v;
  for (int k = 0; k < n; ++k) {
    double x = (k + 0.5) * delta;
    v.push_back(x < 0.43 ? 2 * x : 5 - x);
  }
  int edge = static_cast<int>((0.43 - 0.5 * delta) / delta);
  double e = column_energy(v, delta, {{edge, 0.43}}, 0.5 * delta, 2.0);
  CHECK(e == Approx(0.43 * 4 + 0.57 * 1).epsilon(1e-12));

  auto w = edge_weights(n, delta);
  double sum = 0;
  for (double x : w) sum += x;
  CHECK(sum == Approx(1.0));
}

TEST_CASE("Function3D energies split by direction") {
  Domain2D d = unit_square(0.05, 0.25);
  d.extension = ExtensionMode::kGiven;
  auto u = Function3D::sample(d, 0, 1, 16, 2, [](double t, Vec2 x) { return 3 * t + x.y; }, {});
  CHECK(dirichlet_energy(u, Derivative::kTemporal) == Approx(9.0).epsilon(1e-9));
  CHECK(dirichlet_energy(u, Derivative::kSpatial) == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("disk lattice weights add up to the disk area") {
  for (double h : {0.05, 0.03, 0.011})
    for (Vec2 c : {Vec2{0, 0}, Vec2{0.013, -0.27}}) {
      Domain2D d;
      d.shape = DomainShape::kDisk;
      d.center = c;
      d.radius = 0.8;
      d.margin = 0.15;
      d.h = h;
      double s = 0, e = 0;
      for (double w : d.node_weights(Region::kS)) s += w;
      for (double w : d.node_weights(Region::kExtended)) e += w;
      CHECK(s == doctest::Approx(std::numbers::pi * 0.64).epsilon(1e-12));
      CHECK(e == doctest::Approx(std::numbers::pi * 0.95 * 0.95).epsilon(1e-12));
      double cells = 0;
      for (double w : d.cell_weights(Region::kS)) cells += w;
      CHECK(cells == doctest::Approx(std::numbers::pi * 0.64).epsilon(1e-12));
    }
}
