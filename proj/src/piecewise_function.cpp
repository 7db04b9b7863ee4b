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

// Pieces of [a,b] inside the closed disk B(c, R), as parameter intervals.
std::vector<std::pair<double, double>> clip_to_disk(Vec2 a, Vec2 b, Vec2 c, double R) {
  std::vector<double> cuts = {0.0, 1.0};
  for (double t : segment_circle_crossings(a, b, c, R)) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double t0 = cuts[i], t1 = cuts[i + 1];
    if (t1 - t0 <= 1e-14) continue;
    Vec2 mid = a + (b - a) * (0.5 * (t0 + t1));
    if (distance(mid, c) <= R) out.push_back({t0, t1});
  }
  return out;
}

std::vector<JumpCurve> clip_curves(const std::vector<JumpCurve>& curves, const Domain2D& d) {
  std::vector<JumpCurve> out;
  for (const auto& curve : curves) {
    JumpCurve cur;
    auto flush = [&] {
      if (cur.points.size() >= 2) out.push_back(cur);
      cur.points.clear();
    };
    for (size_t k = 0; k < curve.segment_count(); ++k) {
      Vec2 a = curve.points[k], b = curve.points[k + 1];
      std::vector<std::pair<double, double>> pieces;
      if (d.shape == DomainShape::kRectangle) {
        auto s = clip_segment_to_box(a, b, d.lo.x - d.margin, d.hi.x + d.margin,
                                     d.lo.y - d.margin, d.hi.y + d.margin);
        if (s) {
          Vec2 ab = b - a;
          double l2 = dot(ab, ab);
          pieces.push_back({dot(s->a - a, ab) / l2, dot(s->b - a, ab) / l2});
        }
      } else {
        pieces = clip_to_disk(a, b, d.center, d.radius + d.margin);
      }
      for (auto [t0, t1] : pieces) {
        Vec2 p0 = a + (b - a) * t0, p1 = a + (b - a) * t1;
        if (cur.points.empty() || !(cur.points.back() == p0)) {
          flush();
          cur.points.push_back(p0);
        }
        cur.points.push_back(p1);
      }
      if (pieces.empty() || pieces.back().second < 1.0) flush();
    }
    flush();
  }
  return out;
}

double snap(double x, double origin, double h) {
  double f = (x - origin) / h;
  if (std::abs(f - std::round(f)) < 1e-7) x += 1e-6 * h;
  return x;
}

}  // namespace

PiecewiseFunction2D::PiecewiseFunction2D(Domain2D domain, double p, std::vector<double> values,
                                         std::vector<JumpCurve> curves, bool extended)
    : domain_(domain), grid_(domain.grid()), p_(p), values_(std::move(values)),
      extended_(extended) {
  if (!(p >= 1)) throw InvalidArgument("p: exponent must be >= 1");
  if (values_.size() != grid_.size())
    throw InvalidArgument("PiecewiseFunction2D: value count does not match the lattice");
  curves_ = clip_curves(curves, domain_);
  for (auto& c : curves_)
    for (auto& q : c.points) {
      q.x = snap(q.x, grid_.origin.x, grid_.h);
      q.y = snap(q.y, grid_.origin.y, grid_.h);
    }
  build_index();
}

PiecewiseFunction2D PiecewiseFunction2D::sample(const Domain2D& domain, double p,
                                                const std::function<double(Vec2)>& f,
                                                std::vector<JumpCurve> curves) {
  domain.validate();
  Grid2D g = domain.grid();
  std::vector<double> v(g.size());
  for (size_t k = 0; k < g.size(); ++k) v[k] = f(g.node(k));
  return PiecewiseFunction2D(domain, p, std::move(v), std::move(curves),
                             domain.extension == ExtensionMode::kGiven);
}

PiecewiseFunction2D PiecewiseFunction2D::with_values(std::vector<double> values) const {
  if (values.size() != values_.size())
    throw InvalidArgument("with_values: value count does not match the lattice");
  PiecewiseFunction2D out = *this;
  out.values_ = std::move(values);
  return out;
}

PiecewiseFunction2D PiecewiseFunction2D::with_curves(std::vector<JumpCurve> curves) const {
  return PiecewiseFunction2D(domain_, p_, values_, std::move(curves), extended_);
}

void PiecewiseFunction2D::build_index() {
  segs_.clear();
  for (const auto& c : curves_)
    for (size_t k = 0; k < c.segment_count(); ++k)
      if (c.segment(k).length() > 0) segs_.push_back(c.segment(k));

  const Grid2D& g = grid_;
  cuts_.horizontal.assign(g.size(), 0);
  cuts_.vertical.assign(g.size(), 0);
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  auto col = [&](double x) { return static_cast<int>(std::floor((x - g.origin.x) / g.h)); };
  auto row = [&](double y) { return static_cast<int>(std::floor((y - g.origin.y) / g.h)); };

  for (size_t s = 0; s < segs_.size(); ++s) {
    Vec2 a = segs_[s].a, b = segs_[s].b;
    // Horizontal edges on rows crossed by the segment.
    for (int j = std::max(0, row(std::min(a.y, b.y)) + 1);
         j <= std::min(g.ny - 1, row(std::max(a.y, b.y))); ++j) {
      double y = g.origin.y + j * g.h;
      double x = a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
      int i = col(x);
      if (i >= 0 && i < g.nx - 1) cuts_.horizontal[g.index(i, j)] = 1;
    }
    for (int i = std::max(0, col(std::min(a.x, b.x)) + 1);
         i <= std::min(g.nx - 1, col(std::max(a.x, b.x))); ++i) {
      double x = g.origin.x + i * g.h;
      double y = a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
      int j = row(y);
      if (j >= 0 && j < g.ny - 1) cuts_.vertical[g.index(i, j)] = 1;
    }
    int i0 = std::clamp(col(std::min(a.x, b.x)), 0, g.nx - 2);
    int i1 = std::clamp(col(std::max(a.x, b.x)), 0, g.nx - 2);
    int j0 = std::clamp(row(std::min(a.y, b.y)), 0, g.ny - 2);
    int j1 = std::clamp(row(std::max(a.y, b.y)), 0, g.ny - 2);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        Vec2 lo = g.node(i, j);
        if (clip_segment_to_box(a, b, lo.x, lo.x + g.h, lo.y, lo.y + g.h))
          pairs.push_back({static_cast<uint32_t>(g.index(i, j)), static_cast<uint32_t>(s)});
      }
  }
  std::sort(pairs.begin(), pairs.end());
  cell_index_ = std::move(pairs);
}

bool PiecewiseFunction2D::crosses_jump(Vec2 a, Vec2 b) const {
  if (cell_index_.empty()) return false;
  const Grid2D& g = grid_;
  auto cl = [&](double v, double o, int n) {
    return std::clamp(static_cast<int>(std::floor((v - o) / g.h)), 0, n - 2);
  };
  int i0 = cl(std::min(a.x, b.x), g.origin.x, g.nx), i1 = cl(std::max(a.x, b.x), g.origin.x, g.nx);
  int j0 = cl(std::min(a.y, b.y), g.origin.y, g.ny), j1 = cl(std::max(a.y, b.y), g.origin.y, g.ny);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      uint32_t cell = static_cast<uint32_t>(g.index(i, j));
      auto it = std::lower_bound(cell_index_.begin(), cell_index_.end(),
                                 std::pair<uint32_t, uint32_t>{cell, 0});
      for (; it != cell_index_.end() && it->first == cell; ++it) {
        const Segment2& s = segs_[it->second];
        if (segments_intersect(a, b, s.a, s.b)) return true;
      }
    }
  return false;
}

double PiecewiseFunction2D::evaluate(Vec2 q) const {
  const Grid2D& g = grid_;
  double fx = (q.x - g.origin.x) / g.h, fy = (q.y - g.origin.y) / g.h;
  if (fx < 0 || fy < 0 || fx > g.nx - 1 || fy > g.ny - 1) return 0.0;
  int i = std::min(static_cast<int>(fx), g.nx - 2);
  int j = std::min(static_cast<int>(fy), g.ny - 2);
  double s = fx - i, t = fy - j;
  const int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
  const double w[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
  double sum = 0, wsum = 0, plain = 0;
  int n_valid = 0, nearest = 0;
  for (int c = 0; c < 4; ++c) {
    if (w[c] > w[nearest]) nearest = c;
    Vec2 node = g.node(i + di[c], j + dj[c]);
    if (!extended_ && !domain_.in_S(node)) continue;
    if (crosses_jump(q, node)) continue;
    double v = values_[g.index(i + di[c], j + dj[c])];
    sum += w[c] * v;
    wsum += w[c];
    plain += v;
    ++n_valid;
  }
  if (wsum > 1e-12) return sum / wsum;
  if (n_valid > 0) return plain / n_valid;
  return values_[g.index(i + di[nearest], j + dj[nearest])];
}

std::vector<double> PiecewiseFunction2D::gradient_power() const {
  const Grid2D& g = grid_;
  std::vector<double> out(g.size(), 0.0);
  std::vector<uint8_t> ok_node(g.size(), 1);
  if (!extended_)
    for (size_t k = 0; k < g.size(); ++k) ok_node[k] = domain_.in_S(g.node(k)) ? 1 : 0;
  auto h_ok = [&](int i, int j) {
    size_t k = g.index(i, j);
    return !cuts_.horizontal[k] && ok_node[k] && ok_node[g.index(i + 1, j)];
  };
  auto v_ok = [&](int i, int j) {
    size_t k = g.index(i, j);
    return !cuts_.vertical[k] && ok_node[k] && ok_node[g.index(i, j + 1)];
  };
  auto val = [&](int i, int j) { return values_[g.index(i, j)]; };
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      double dx = 0, dy = 0;
      int nx = 0, ny = 0;
      if (h_ok(i, j)) { dx += val(i + 1, j) - val(i, j); ++nx; }
      if (h_ok(i, j + 1)) { dx += val(i + 1, j + 1) - val(i, j + 1); ++nx; }
      if (v_ok(i, j)) { dy += val(i, j + 1) - val(i, j); ++ny; }
      if (v_ok(i + 1, j)) { dy += val(i + 1, j + 1) - val(i + 1, j); ++ny; }
      if (nx) dx /= nx * g.h;
      if (ny) dy /= ny * g.h;
      double g2 = dx * dx + dy * dy;
      out[g.index(i, j)] = p_ == 2 ? g2 : std::pow(g2, p_ / 2);
    }
  return out;
}

double dirichlet_energy(const PiecewiseFunction2D& u, Region region) {
  auto w = u.domain().cell_weights(region);
  auto gp = u.gradient_power();
  double e = 0;
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0) e += w[k] * gp[k];
  return e;
}

}  // namespace sbv
