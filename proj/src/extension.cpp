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

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "gsbv_model.hpp"

namespace sbv {

namespace {

double distance_to_boundary(const Domain2D& d, Vec2 p) {
  if (d.shape == DomainShape::kRectangle) {
    if (!d.in_S(p)) return d.distance_to_S(p);
    return std::min({p.x - d.lo.x, d.hi.x - p.x, p.y - d.lo.y, d.hi.y - p.y});
  }
  return std::abs(distance(p, d.center) - d.radius);
}

}  // namespace

std::vector<JumpCurve> restrict_to_S(const std::vector<JumpCurve>& curves, const Domain2D& d) {
  std::vector<JumpCurve> out;
  for (const auto& c : curves)
    for (size_t k = 0; k < c.segment_count(); ++k) {
      Segment2 s = c.segment(k);
      if (d.shape == DomainShape::kRectangle) {
        if (auto r = clip_segment_to_box(s.a, s.b, d.lo.x, d.hi.x, d.lo.y, d.hi.y))
          out.push_back({{r->a, r->b}});
      } else {
        std::vector<double> cuts = {0.0, 1.0};
        for (double t : segment_circle_crossings(s.a, s.b, d.center, d.radius)) cuts.push_back(t);
        std::sort(cuts.begin(), cuts.end());
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
          Vec2 p0 = s.a + (s.b - s.a) * cuts[i], p1 = s.a + (s.b - s.a) * cuts[i + 1];
          if (cuts[i + 1] - cuts[i] > 1e-14 && d.in_S((p0 + p1) * 0.5)) out.push_back({{p0, p1}});
        }
      }
    }
  return out;
}

namespace {

std::vector<JumpCurve> reflect_rectangle(const std::vector<JumpCurve>& curves, const Domain2D& d) {
  std::vector<JumpCurve> out;
  const double m = d.margin;
  for (int sy = -1; sy <= 1; ++sy)
    for (int sx = -1; sx <= 1; ++sx) {
      double x0 = sx < 0 ? d.lo.x - m : sx == 0 ? d.lo.x : d.hi.x;
      double x1 = sx < 0 ? d.lo.x : sx == 0 ? d.hi.x : d.hi.x + m;
      double y0 = sy < 0 ? d.lo.y - m : sy == 0 ? d.lo.y : d.hi.y;
      double y1 = sy < 0 ? d.lo.y : sy == 0 ? d.hi.y : d.hi.y + m;
      auto map = [&](Vec2 p) {
        if (sx < 0) p.x = 2 * d.lo.x - p.x;
        if (sx > 0) p.x = 2 * d.hi.x - p.x;
        if (sy < 0) p.y = 2 * d.lo.y - p.y;
        if (sy > 0) p.y = 2 * d.hi.y - p.y;
        return p;
      };
      for (const auto& c : curves)
        for (size_t k = 0; k < c.segment_count(); ++k) {
          Segment2 s = c.segment(k);
          if (auto r = clip_segment_to_box(map(s.a), map(s.b), x0, x1, y0, y1))
            out.push_back({{r->a, r->b}});
        }
    }
  return out;
}

// Images under rho -> 2R - rho, from subsegments of length <= h/4.
std::vector<JumpCurve> reflect_disk(const std::vector<JumpCurve>& curves, const Domain2D& d) {
  const double R = d.radius, inner = R - d.margin;
  auto map = [&](Vec2 p) {
    double r = distance(p, d.center);
    return d.center + (p - d.center) * ((2 * R - r) / r);
  };
  std::vector<JumpCurve> out(curves);  // the part inside S
  for (const auto& c : curves)
    for (size_t k = 0; k < c.segment_count(); ++k) {
      Segment2 s = c.segment(k);
      int n = std::max(1, static_cast<int>(std::ceil(s.length() / (d.h / 4))));
      JumpCurve cur;
      for (int i = 0; i < n; ++i) {
        Vec2 p0 = s.a + (s.b - s.a) * (double(i) / n);
        Vec2 p1 = s.a + (s.b - s.a) * (double(i + 1) / n);
        bool in0 = distance(p0, d.center) >= inner, in1 = distance(p1, d.center) >= inner;
        if (in0 != in1) {
          Vec2 a = in0 ? p1 : p0, b = in0 ? p0 : p1;  // a outside, b inside the band
          for (int it = 0; it < 60; ++it) {
            Vec2 mid = (a + b) * 0.5;
            (distance(mid, d.center) >= inner ? b : a) = mid;
          }
          if (in0) p1 = b; else p0 = b;
        }
        if (!in0 && !in1) {
          if (cur.points.size() >= 2) out.push_back(cur);
          cur.points.clear();
          continue;
        }
        if (cur.points.empty()) cur.points.push_back(map(p0));
        cur.points.push_back(map(p1));
        if (!in1) {
          out.push_back(cur);
          cur.points.clear();
        }
      }
      if (cur.points.size() >= 2) out.push_back(cur);
    }
  return out;
}

}  // namespace

Extension extend(const PiecewiseFunction2D& u) {
  Extension ext;
  const Domain2D& d = u.domain();
  if (u.extended()) {
    ext.U = u;
    return ext;
  }
  bool near = std::any_of(u.curves().begin(), u.curves().end(), [&](const JumpCurve& c) {
    return std::any_of(c.points.begin(), c.points.end(),
                       [&](Vec2 p) { return distance_to_boundary(d, p) < d.h; });
  });
  if (near) ext.warnings.push_back("jump curve within one cell of the boundary of S; clipped to S");
  auto inside = restrict_to_S(u.curves(), d);
  PiecewiseFunction2D base = u.with_curves(inside);
  const Grid2D& g = u.grid();
  std::vector<double> v(g.size());
  for (size_t k = 0; k < g.size(); ++k) {
    Vec2 q = g.node(k);
    v[k] = d.in_S(q) ? u.values()[k] : base.evaluate(d.reflect(q));
  }
  auto curves = d.shape == DomainShape::kRectangle ? reflect_rectangle(inside, d)
                                                   : reflect_disk(inside, d);
  ext.U = PiecewiseFunction2D(d, u.p(), std::move(v), std::move(curves), true);
  double e_u = dirichlet_energy(u, Region::kS);
  double e_U = dirichlet_energy(ext.U, Region::kExtended);
  ext.energy_ratio = e_u > 0 ? e_U / e_u : 1.0;
  double j_u = jump_mass(inside);
  ext.jump_ratio = j_u > 0 ? jump_mass(ext.U.curves()) / j_u : 1.0;
  return ext;
}

}  // namespace sbv
