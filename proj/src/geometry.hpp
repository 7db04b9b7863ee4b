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

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace sbv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3&) const = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Coordinates are (x1, x2, x3); x1 is the distinguished "time" axis.
struct Triangle3 {
  Vec3 a, b, c;

  double area() const { return 0.5 * norm(cross(b - a, c - a)); }
  // Unit normal; zero vector for a degenerate triangle.
  Vec3 unit_normal() const {
    Vec3 n = cross(b - a, c - a);
    double l = norm(n);
    return l > 0 ? n * (1.0 / l) : Vec3{};
  }
};

struct Segment2 {
  Vec2 a, b;
  double length() const { return distance(a, b); }
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double point_triangle_distance(Vec3 p, const Triangle3& t);

// Closed segments [p0,p1] and [q0,q1] intersect (collinear overlaps count).
bool segments_intersect(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1);

// Portion of [a,b] inside the axis-aligned box, if nonempty.
std::optional<Segment2> clip_segment_to_box(Vec2 a, Vec2 b, double xmin, double xmax,
                                            double ymin, double ymax);

// Parameter values in (0,1) where segment [a,b] crosses the circle |x-c| = r.
std::vector<double> segment_circle_crossings(Vec2 a, Vec2 b, Vec2 c, double r);

// Subsegments of [a,b] lying outside every open disk in the list.
std::vector<Segment2> segment_minus_disks(Vec2 a, Vec2 b,
                                          const std::vector<std::pair<Vec2, double>>& disks);

// Intersection of triangle with the plane x1 = c, as a segment in (x2,x3).
// Vertices on the plane are treated as lying on the positive side.
std::optional<Segment2> triangle_section(const Triangle3& t, double c);

}  // namespace sbv
