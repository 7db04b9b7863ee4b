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
#include "parallel.hpp"

namespace sbv {

std::vector<JumpCurve> sections(const std::vector<Triangle3>& surface, double x1) {
  std::vector<JumpCurve> out;
  for (const auto& t : surface)
    if (auto s = triangle_section(t, x1)) out.push_back({{s->a, s->b}});
  return out;
}

double jump_mass(const std::vector<Triangle3>& surface, JumpWeight weight) {
  double m = 0;
  for (const auto& t : surface) {
    Vec3 n = t.unit_normal();
    double w = weight == JumpWeight::kFull         ? 1.0
               : weight == JumpWeight::kTransverse ? std::hypot(n.y, n.z)
                                                   : std::abs(n.x);
    m += t.area() * w;
  }
  return m;
}

Function3D::Function3D(double a, double b, std::vector<PiecewiseFunction2D> slices,
                       std::vector<Triangle3> surface)
    : a_(a), b_(b), slices_(std::move(slices)), surface_(std::move(surface)) {
  if (!(b > a)) throw InvalidArgument("interval: upper end must exceed lower end");
  if (slices_.empty()) throw InvalidArgument("slices: at least one slice is required");
  const Grid2D& g = slices_.front().grid();
  for (const auto& s : slices_)
    if (!(s.grid() == g)) throw InvalidArgument("slices: all slices must share one lattice");

  crossings_.assign(g.size(), {});
  const int n = slice_count();
  const double delta = thickness();
  // Boundary nodes stand for the part of their box inside S, so their columns
  // are tested at the nearest point of S.
  const Domain2D& dom = domain();
  const auto nwS = dom.node_weights(Region::kS);
  auto probe = [&](Vec2 q, size_t idx) {
    if (nwS[idx] <= 0 || dom.in_S(q)) return q;
    if (dom.shape == DomainShape::kRectangle)
      return Vec2{std::clamp(q.x, dom.lo.x, dom.hi.x), std::clamp(q.y, dom.lo.y, dom.hi.y)};
    Vec2 d = q - dom.center;
    return dom.center + d * (dom.radius / norm(d));
  };
  for (const auto& t : surface_) {
    Vec2 A{t.a.y, t.a.z}, B{t.b.y, t.b.z}, C{t.c.y, t.c.z};
    double area2 = cross(B - A, C - A);
    if (std::abs(area2) < 1e-14) continue;  // wall parallel to x1
    const double pad = dom.h;
    double xmin = std::min({A.x, B.x, C.x}) - pad, xmax = std::max({A.x, B.x, C.x}) + pad;
    double ymin = std::min({A.y, B.y, C.y}) - pad, ymax = std::max({A.y, B.y, C.y}) + pad;
    int i0 = std::max(0, static_cast<int>(std::ceil((xmin - g.origin.x) / g.h)));
    int i1 = std::min(g.nx - 1, static_cast<int>(std::floor((xmax - g.origin.x) / g.h)));
    int j0 = std::max(0, static_cast<int>(std::ceil((ymin - g.origin.y) / g.h)));
    int j1 = std::min(g.ny - 1, static_cast<int>(std::floor((ymax - g.origin.y) / g.h)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        Vec2 q = probe(g.node(i, j), g.index(i, j));
        double la = cross(B - q, C - q) / area2;
        double lb = cross(C - q, A - q) / area2;
        double lc = 1 - la - lb;
        if (la < -1e-12 || lb < -1e-12 || lc < -1e-12) continue;
        double x1 = la * t.a.x + lb * t.b.x + lc * t.c.x;
        int k = static_cast<int>(std::floor((x1 - a_) / delta - 0.5));
        if (k < 0 || k >= n - 1) continue;
        if (!(x1 > slice_center(k) && x1 < slice_center(k + 1))) continue;
        crossings_[g.index(i, j)].push_back({k, x1});
      }
  }
  for (auto& c : crossings_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end(),
                        [](const auto& x, const auto& y) {
                          return x.first == y.first && std::abs(x.second - y.second) < 1e-9;
                        }),
            c.end());
  }
}

Function3D Function3D::sample(const Domain2D& domain, double a, double b, int n_slices, double p,
                              const std::function<double(double, Vec2)>& f,
                              std::vector<Triangle3> surface) {
  if (n_slices < 1) throw InvalidArgument("slices: must be positive");
  domain.validate();
  std::vector<PiecewiseFunction2D> slices;
  slices.reserve(static_cast<size_t>(n_slices));
  double delta = (b - a) / n_slices;
  for (int k = 0; k < n_slices; ++k) {
    double x1 = a + (k + 0.5) * delta;
    slices.push_back(PiecewiseFunction2D::sample(
        domain, p, [&](Vec2 q) { return f(x1, q); }, sections(surface, x1)));
  }
  return Function3D(a, b, std::move(slices), std::move(surface));
}

std::vector<double> edge_weights(int n, double delta) {
  if (n < 2) return {};
  std::vector<double> w(static_cast<size_t>(n - 1), delta);
  w.front() += delta / 2;
  w.back() += delta / 2;
  return w;
}

std::vector<double> column_slopes(const std::vector<double>& values, double delta,
                                  const std::vector<std::pair<int, double>>& crossings) {
  const int n = static_cast<int>(values.size());
  if (n < 2) return {};
  std::vector<double> d(static_cast<size_t>(n - 1));
  std::vector<uint8_t> cut(d.size(), 0);
  for (const auto& c : crossings) cut[static_cast<size_t>(c.first)] = 1;
  for (int k = 0; k + 1 < n; ++k) d[k] = (values[k + 1] - values[k]) / delta;
  std::vector<double> out = d;
  for (int k = 0; k + 1 < n; ++k) {
    if (!cut[k]) continue;
    int l = k - 1, r = k + 1;
    while (l >= 0 && cut[l]) --l;
    while (r < n - 1 && cut[r]) ++r;
    bool hl = l >= 0, hr = r < n - 1;
    out[k] = hl && hr ? 0.5 * (d[l] + d[r]) : hl ? d[l] : hr ? d[r] : 0.0;
  }
  return out;
}

double column_energy(const std::vector<double>& values, double delta,
                     const std::vector<std::pair<int, double>>& crossings, double x_first,
                     double p) {
  const int n = static_cast<int>(values.size());
  if (n < 2) return 0.0;
  auto ew = edge_weights(n, delta);
  auto d = column_slopes(values, delta, crossings);
  std::vector<uint8_t> cut(d.size(), 0);
  for (const auto& c : crossings) cut[static_cast<size_t>(c.first)] = 1;
  auto pw = [p](double x) { return p == 2 ? x * x : std::pow(std::abs(x), p); };
  double e = 0;
  size_t c = 0;
  for (int k = 0; k + 1 < n; ++k) {
    if (!cut[k]) {
      e += ew[k] * pw(d[k]);
      continue;
    }
    // Left of the first crossing the edge follows the nearest clean slope on
    // the left, right of the last one the nearest clean slope on the right.
    while (crossings[c].first < k) ++c;
    double s0 = crossings[c].second, s1 = s0;
    for (size_t m = c; m < crossings.size() && crossings[m].first == k; ++m) s1 = crossings[m].second;
    int l = k - 1, r = k + 1;
    while (l >= 0 && cut[l]) --l;
    while (r < n - 1 && cut[r]) ++r;
    double dl = l >= 0 ? d[l] : r < n - 1 ? d[r] : 0.0;
    double dr = r < n - 1 ? d[r] : dl;
    double xk = x_first + k * delta;
    double left = s0 - xk, right = xk + delta - s1;
    if (k == 0) left += delta / 2;
    if (k == n - 2) right += delta / 2;
    e += left * pw(dl) + right * pw(dr);
  }
  return e;
}

namespace {

std::vector<double> column(const Function3D& u, size_t node) {
  std::vector<double> v(static_cast<size_t>(u.slice_count()));
  for (int k = 0; k < u.slice_count(); ++k) v[k] = u.slice(k).values()[node];
  return v;
}


}  // namespace

double dirichlet_energy(const Function3D& u, Derivative which) {
  const double delta = u.thickness(), p = u.p();
  if (which == Derivative::kSpatial) {
    double e = 0;
    for (const auto& s : u.slices()) e += delta * dirichlet_energy(s, Region::kS);
    return e;
  }
  const Grid2D& g = u.slice(0).grid();
  auto nw = u.domain().node_weights(Region::kS);
  const int n = u.slice_count();
  auto ew = edge_weights(n, delta);
  if (which == Derivative::kTemporal) {
    double e = 0;
    for (size_t q = 0; q < g.size(); ++q) {
      if (nw[q] <= 0) continue;
      e += nw[q] * column_energy(column(u, q), delta, u.temporal_crossings()[q],
                                 u.slice_center(0), p);
    }
    return e;
  }
  // Full gradient at nodes: mean squared spatial gradient of adjacent cells
  // together with the mean slope of adjacent temporal edges.
  std::vector<std::vector<double>> g2(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    auto gp = u.slice(k).gradient_power();
    for (auto& x : gp) x = p == 2 ? x : std::pow(x, 2 / p);
    g2[k] = std::move(gp);
  }
  double e = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      size_t q = g.index(i, j);
      if (nw[q] <= 0) continue;
      std::vector<double> d =
          n > 1 ? column_slopes(column(u, q), delta, u.temporal_crossings()[q]) : std::vector<double>{};
      for (int k = 0; k < n; ++k) {
        double s2 = 0;
        int cells = 0;
        for (int dj = -1; dj <= 0; ++dj)
          for (int di = -1; di <= 0; ++di) {
            int ci = i + di, cj = j + dj;
            if (ci < 0 || cj < 0 || ci >= g.nx - 1 || cj >= g.ny - 1) continue;
            s2 += g2[k][g.index(ci, cj)];
            ++cells;
          }
        if (cells) s2 /= cells;
        double t = 0;
        if (!d.empty()) {
          if (k == 0) t = d.front();
          else if (k == n - 1) t = d.back();
          else t = 0.5 * (d[k - 1] + d[k]);
        }
        double v = s2 + t * t;
        e += nw[q] * delta * (p == 2 ? v : std::pow(v, p / 2));
      }
    }
  return e;
}

}  // namespace sbv
