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

#include "gsbv_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace sbv {

namespace {

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) < tol; }

// \int sqrt(R^2 - x^2) dx
double half_chord_primitive(double x, double R) {
  double t = std::clamp(x / R, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(std::max(0.0, R * R - x * x)) + R * R * std::asin(t));
}

// Exact area of [x0, x1] x [y0, y1] inside the disk B(0, R): the vertical
// chord clipped to [y0, y1] is integrated piece by piece between the
// abscissae where the circle crosses y0 and y1.
double box_in_disk(double x0, double x1, double y0, double y1, double R) {
  x0 = std::max(x0, -R), x1 = std::min(x1, R);
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;
  std::vector<double> cuts{x0, x1};
  for (double y : {y0, y1})
    if (std::abs(y) < R) {
      double x = std::sqrt(R * R - y * y);
      for (double c : {-x, x})
        if (c > x0 && c < x1) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  double area = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    double m = 0.5 * (a + b), s = std::sqrt(std::max(0.0, R * R - m * m));
    double top = std::min(y1, s), bottom = std::max(y0, -s);
    if (top <= bottom) continue;
    // top is y1 or +s, bottom is y0 or -s on the whole piece.
    double chord = half_chord_primitive(b, R) - half_chord_primitive(a, R);
    area += (s < y1 ? chord : y1 * (b - a)) - (-s > y0 ? -chord : y0 * (b - a));
  }
  return area;
}

// Area of the square [c - h/2, c + h/2]^2 inside the disk.
double square_in_disk(Vec2 c, double h, Vec2 center, double R) {
  double hx = h / 2;
  double dx = std::max(0.0, std::abs(c.x - center.x) - hx);
  double dy = std::max(0.0, std::abs(c.y - center.y) - hx);
  if (std::hypot(dx, dy) >= R) return 0.0;
  double fx = std::abs(c.x - center.x) + hx, fy = std::abs(c.y - center.y) + hx;
  if (std::hypot(fx, fy) <= R) return h * h;
  Vec2 q = c - center;
  return box_in_disk(q.x - hx, q.x + hx, q.y - hx, q.y + hx, R);
}

}  // namespace

void Domain2D::validate() const {
  if (!(h > 0)) throw InvalidArgument("domain.grid: spacing must be positive");
  if (!(margin > 0)) throw InvalidArgument("domain.margin: must be positive");
  if (shape == DomainShape::kRectangle) {
    double wx = hi.x - lo.x, wy = hi.y - lo.y;
    if (!(wx > 0 && wy > 0)) throw InvalidArgument("domain.hi: must exceed domain.lo");
    if (!near_integer(wx / h, 1e-6) || !near_integer(wy / h, 1e-6))
      throw InvalidArgument("domain.grid: rectangle sides must be multiples of the spacing");
    if (extension == ExtensionMode::kReflect && margin > std::min(wx, wy))
      throw InvalidArgument("domain.margin: reflection needs margin <= shortest side");
  } else {
    if (!(radius > 0)) throw InvalidArgument("domain.radius: must be positive");
    if (extension == ExtensionMode::kReflect && margin >= radius)
      throw InvalidArgument("domain.margin: radial reflection needs margin < radius");
  }
}

bool Domain2D::in_S(Vec2 p) const {
  if (shape == DomainShape::kRectangle)
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  return distance(p, center) <= radius;
}

bool Domain2D::in_extended(Vec2 p) const {
  if (shape == DomainShape::kRectangle)
    return p.x >= lo.x - margin && p.x <= hi.x + margin && p.y >= lo.y - margin &&
           p.y <= hi.y + margin;
  return distance(p, center) <= radius + margin;
}

double Domain2D::distance_to_S(Vec2 p) const {
  if (shape == DomainShape::kRectangle) {
    double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
  }
  return std::max(0.0, distance(p, center) - radius);
}

double Domain2D::area() const {
  if (shape == DomainShape::kRectangle) return (hi.x - lo.x) * (hi.y - lo.y);
  return std::numbers::pi * radius * radius;
}

double Domain2D::extended_area() const {
  if (shape == DomainShape::kRectangle)
    return (hi.x - lo.x + 2 * margin) * (hi.y - lo.y + 2 * margin);
  return std::numbers::pi * (radius + margin) * (radius + margin);
}

Grid2D Domain2D::grid() const {
  Grid2D g;
  g.h = h;
  if (shape == DomainShape::kRectangle) {
    int k = static_cast<int>(std::ceil(margin / h - 1e-9));
    g.origin = {lo.x - k * h, lo.y - k * h};
    g.nx = static_cast<int>(std::lround((hi.x - lo.x) / h)) + 2 * k + 1;
    g.ny = static_cast<int>(std::lround((hi.y - lo.y) / h)) + 2 * k + 1;
  } else {
    int k = static_cast<int>(std::ceil((radius + margin) / h - 1e-9));
    g.origin = {center.x - k * h, center.y - k * h};
    g.nx = g.ny = 2 * k + 1;
  }
  return g;
}

Vec2 Domain2D::reflect(Vec2 p) const {
  if (shape == DomainShape::kRectangle) {
    auto fold = [](double x, double a, double b) {
      if (x < a) x = 2 * a - x;
      if (x > b) x = 2 * b - x;
      return std::clamp(x, a, b);
    };
    return {fold(p.x, lo.x, hi.x), fold(p.y, lo.y, hi.y)};
  }
  double r = distance(p, center);
  if (r <= radius) return p;
  double r2 = std::max(0.0, 2 * radius - r);
  return center + (p - center) * (r2 / r);
}

std::vector<double> Domain2D::cell_weights(Region r) const {
  Grid2D g = grid();
  std::vector<double> w(g.size(), 0.0);
  double grow = r == Region::kS ? 0.0 : margin;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      Vec2 c = g.cell_center(i, j);
      double v;
      if (shape == DomainShape::kRectangle)
        v = overlap(c.x - h / 2, c.x + h / 2, lo.x - grow, hi.x + grow) *
            overlap(c.y - h / 2, c.y + h / 2, lo.y - grow, hi.y + grow);
      else
        v = square_in_disk(c, h, center, radius + grow);
      w[g.index(i, j)] = v;
    }
  return w;
}

std::vector<double> Domain2D::node_weights(Region r) const {
  Grid2D g = grid();
  std::vector<double> w(g.size(), 0.0);
  double grow = r == Region::kS ? 0.0 : margin;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 c = g.node(i, j);
      double v;
      if (shape == DomainShape::kRectangle)
        v = overlap(c.x - h / 2, c.x + h / 2, lo.x - grow, hi.x + grow) *
            overlap(c.y - h / 2, c.y + h / 2, lo.y - grow, hi.y + grow);
      else
        v = square_in_disk(c, h, center, radius + grow);
      w[g.index(i, j)] = v;
    }
  return w;
}

double JumpCurve::length() const {
  double l = 0;
  for (size_t k = 0; k < segment_count(); ++k) l += segment(k).length();
  return l;
}

Vec2 JumpCurve::normal(size_t k) const {
  Vec2 d = points[k + 1] - points[k];
  double l = norm(d);
  if (!(l > 0)) throw DegenerateInput("JumpCurve: zero-length segment");
  return {-d.y / l, d.x / l};
}

double jump_mass(const std::vector<JumpCurve>& curves) {
  double m = 0;
  for (const auto& c : curves) m += c.length();
  return m;
}

size_t CutEdges::count() const {
  size_t n = 0;
  for (auto f : horizontal) n += f;
  for (auto f : vertical) n += f;
  return n;
}

std::vector<Ball> vitali_cover(const std::vector<JumpCurve>& curves, double rho) {
  if (!(rho > 0)) throw InvalidArgument("vitali_cover: cover radius must be positive");
  std::vector<Ball> out;
  int id = 0;
  for (const auto& c : curves)
    for (size_t k = 0; k < c.segment_count(); ++k) {
      Segment2 s = c.segment(k);
      double len = s.length();
      if (!(len > 0)) continue;
      int n = std::max(1, static_cast<int>(std::ceil(len / rho - 1e-12)));
      double offset = (len - (n - 1) * rho) / 2;
      Vec2 dir = (s.b - s.a) / len;
      for (int i = 0; i < n; ++i) out.push_back({s.a + dir * (offset + i * rho), rho, id++});
    }
  return out;
}

double covering_constant(const std::vector<Ball>& cover, double jump_length) {
  if (!(jump_length > 0)) return 0.0;
  double s = 0;
  for (const auto& b : cover) s += b.radius;
  return s / jump_length;
}

}  // namespace sbv
