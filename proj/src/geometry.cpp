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

#include "geometry.hpp"

#include <algorithm>
#include <limits>

namespace sbv {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double l2 = dot(d, d);
  double t = l2 > 0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
  return distance(p, a + d * t);
}

namespace {

Vec3 closest_point_on_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;
  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

double point_triangle_distance(Vec3 p, const Triangle3& t) {
  return norm(p - closest_point_on_triangle(p, t.a, t.b, t.c));
}

bool segments_intersect(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1) {
  int o1 = orientation(p0, p1, q0), o2 = orientation(p0, p1, q1);
  int o3 = orientation(q0, q1, p0), o4 = orientation(q0, q1, p1);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p0, p1, q0)) return true;
  if (o2 == 0 && on_segment(p0, p1, q1)) return true;
  if (o3 == 0 && on_segment(q0, q1, p0)) return true;
  if (o4 == 0 && on_segment(q0, q1, p1)) return true;
  return false;
}

std::optional<Segment2> clip_segment_to_box(Vec2 a, Vec2 b, double xmin, double xmax,
                                            double ymin, double ymax) {
  // Liang-Barsky.
  double t0 = 0.0, t1 = 1.0;
  Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - xmin, xmax - a.x, a.y - ymin, ymax - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0) {
      if (q[i] < 0) return std::nullopt;
      continue;
    }
    double r = q[i] / p[i];
    if (p[i] < 0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    if (t0 > t1) return std::nullopt;
  }
  if (t1 - t0 <= 0) return std::nullopt;
  return Segment2{a + d * t0, a + d * t1};
}

std::vector<double> segment_circle_crossings(Vec2 a, Vec2 b, Vec2 c, double r) {
  Vec2 d = b - a, f = a - c;
  double A = dot(d, d), B = 2 * dot(f, d), C = dot(f, f) - r * r;
  std::vector<double> out;
  if (A == 0) return out;
  double disc = B * B - 4 * A * C;
  if (disc <= 0) return out;
  double s = std::sqrt(disc);
  for (double t : {(-B - s) / (2 * A), (-B + s) / (2 * A)})
    if (t > 0 && t < 1) out.push_back(t);
  return out;
}

std::vector<Segment2> segment_minus_disks(Vec2 a, Vec2 b,
                                          const std::vector<std::pair<Vec2, double>>& disks) {
  std::vector<double> cuts = {0.0, 1.0};
  for (const auto& [c, r] : disks)
    for (double t : segment_circle_crossings(a, b, c, r)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Segment2> out;
  Vec2 d = b - a;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double t0 = cuts[i], t1 = cuts[i + 1];
    if (t1 - t0 <= 1e-14) continue;
    Vec2 mid = a + d * (0.5 * (t0 + t1));
    bool covered = false;
    for (const auto& [c, r] : disks)
      if (distance(mid, c) < r) { covered = true; break; }
    if (!covered) {
      Vec2 p0 = a + d * t0, p1 = a + d * t1;
      if (!out.empty() && out.back().b == p0) out.back().b = p1;
      else out.push_back({p0, p1});
    }
  }
  return out;
}

std::optional<Segment2> triangle_section(const Triangle3& t, double c) {
  const Vec3 v[3] = {t.a, t.b, t.c};
  std::vector<Vec2> pts;
  for (int i = 0; i < 3; ++i) {
    const Vec3& p = v[i];
    const Vec3& q = v[(i + 1) % 3];
    bool sp = p.x >= c, sq = q.x >= c;
    if (sp == sq) continue;
    double s = (c - p.x) / (q.x - p.x);
    pts.push_back({p.y + s * (q.y - p.y), p.z + s * (q.z - p.z)});
  }
  if (pts.size() != 2) return std::nullopt;
  if (pts[0] == pts[1]) return std::nullopt;
  return Segment2{pts[0], pts[1]};
}

}  // namespace sbv
