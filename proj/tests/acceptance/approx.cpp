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


// Criteria 4-6: the planar approximation on crack scenarios, the sliced
// approximation on tilted cracks, and the Poincare profile.

#include <cmath>

#include "common.hpp"
#include "cylinder_approx_3d.hpp"
#include "scenario.hpp"
#include "sobolev_approx_2d.hpp"

namespace sbv::acceptance {
namespace {

// Point where the lattice edge p-q meets the segment a-b, if any.
std::optional<Vec2> edge_hit(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
  Vec2 d = q - p, e = b - a;
  double den = cross(d, e);
  if (den == 0) return std::nullopt;
  double s = cross(a - p, e) / den, t = cross(a - p, d) / den;
  if (s < 0 || s > 1 || t < 0 || t > 1) return std::nullopt;
  return p + d * s;
}

bool in_rect(const Domain2D& d, Vec2 x) {
  return x.x >= d.lo.x && x.x <= d.hi.x && x.y >= d.lo.y && x.y <= d.hi.y;
}

bool in_open_disks(const std::vector<Ball>& disks, Vec2 x) {
  for (const auto& b : disks)
    if (distance(x, b.center) < b.radius) return true;
  return false;
}

bool in_closed_disks(const std::vector<Ball>& disks, Vec2 x) {
  for (const auto& b : disks)
    if (distance(x, b.center) <= b.radius * (1 + 1e-9)) return true;
  return false;
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Lattice edges with both ends in S. Visits (from, to, horizontal, edge index).
template <class F>
void edges_near(const Grid2D& g, Vec2 lo, Vec2 hi, F&& f) {
  int i0 = std::max(0, static_cast<int>(std::floor((lo.x - g.origin.x) / g.h)) - 1);
  int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((hi.x - g.origin.x) / g.h)) + 1);
  int j0 = std::max(0, static_cast<int>(std::floor((lo.y - g.origin.y) / g.h)) - 1);
  int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((hi.y - g.origin.y) / g.h)) + 1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      if (i + 1 <= i1) f(g.node(i, j), g.node(i + 1, j), true, g.index(i, j));
      if (j + 1 <= j1) f(g.node(i, j), g.node(i, j + 1), false, g.index(i, j));
    }
}

// Cut flags of every lattice edge met by the segments.
std::pair<std::vector<uint8_t>, std::vector<uint8_t>> cut_edges(const Grid2D& g,
                                                               const std::vector<Segment2>& segs) {
  std::vector<uint8_t> hor(g.size(), 0), ver(g.size(), 0);
  for (const auto& s : segs) {
    Vec2 lo{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)};
    Vec2 hi{std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)};
    edges_near(g, lo, hi, [&](Vec2 p, Vec2 q, bool horizontal, size_t k) {
      if (edge_hit(p, q, s.a, s.b)) (horizontal ? hor : ver)[k] = 1;
    });
  }
  return {hor, ver};
}

std::vector<Segment2> segments_of(const std::vector<JumpCurve>& curves) {
  std::vector<Segment2> out;
  for (const auto& c : curves)
    for (size_t k = 0; k + 1 < c.points.size(); ++k) out.push_back({c.points[k], c.points[k + 1]});
  return out;
}

// \int_S |grad v|^p with the cell gradient averaged over uncut edges whose
// ends lie in S, weighted by |cell ∩ S|.
double energy_on_rect(const Domain2D& d, const Grid2D& g, const std::vector<double>& v, double p,
                      const std::vector<Segment2>& segs) {
  auto [hor, ver] = cut_edges(g, segs);
  std::vector<uint8_t> in(g.size());
  for (size_t k = 0; k < g.size(); ++k) in[k] = in_rect(d, g.node(k));
  auto h_ok = [&](int i, int j) {
    size_t k = g.index(i, j);
    return !hor[k] && in[k] && in[g.index(i + 1, j)];
  };
  auto v_ok = [&](int i, int j) {
    size_t k = g.index(i, j);
    return !ver[k] && in[k] && in[g.index(i, j + 1)];
  };
  double e = 0;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      Vec2 c = g.cell_center(i, j);
      double wgt = overlap(c.x - g.h / 2, c.x + g.h / 2, d.lo.x, d.hi.x) *
                   overlap(c.y - g.h / 2, c.y + g.h / 2, d.lo.y, d.hi.y);
      if (wgt <= 0) continue;
      double dx = 0, dy = 0;
      int nx = 0, ny = 0;
      auto val = [&](int a, int b) { return v[g.index(a, b)]; };
      if (h_ok(i, j)) dx += val(i + 1, j) - val(i, j), ++nx;
      if (h_ok(i, j + 1)) dx += val(i + 1, j + 1) - val(i, j + 1), ++nx;
      if (v_ok(i, j)) dy += val(i, j + 1) - val(i, j), ++ny;
      if (v_ok(i + 1, j)) dy += val(i + 1, j + 1) - val(i + 1, j), ++ny;
      if (nx) dx /= nx * g.h;
      if (ny) dy /= ny * g.h;
      e += wgt * std::pow(dx * dx + dy * dy, p / 2);
    }
  return e;
}

// Length of the segments inside the closed rectangle.
double length_in_rect(const Domain2D& d, const std::vector<Segment2>& segs) {
  double total = 0;
  for (const auto& s : segs) {
    double t0 = 0, t1 = 1;
    Vec2 e = s.b - s.a;
    auto keep = [&](double p0, double dp, double lo, double hi) {
      if (dp == 0) return p0 >= lo && p0 <= hi;
      double a = (lo - p0) / dp, b = (hi - p0) / dp;
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a), t1 = std::min(t1, b);
      return true;
    };
    if (keep(s.a.x, e.x, d.lo.x, d.hi.x) && keep(s.a.y, e.y, d.lo.y, d.hi.y) && t1 > t0)
      total += (t1 - t0) * s.length();
  }
  return total;
}

// Section of a triangle by the plane x1 = c, computed from its edges.
std::optional<Segment2> section(const Triangle3& t, double c) {
  const Vec3 v[3] = {t.a, t.b, t.c};
  std::vector<Vec2> pts;
  for (int k = 0; k < 3; ++k) {
    Vec3 p = v[k], q = v[(k + 1) % 3];
    double fp = p.x - c, fq = q.x - c;
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      double s = fp / (fp - fq);
      pts.push_back({p.y + s * (q.y - p.y), p.z + s * (q.z - p.z)});
    } else if (fp == 0) {
      pts.push_back({p.y, p.z});
    }
  }
  if (pts.size() < 2) return std::nullopt;
  return Segment2{pts[0], pts[1]};
}

double transverse_mass(const std::vector<Triangle3>& surface) {
  double m = 0;
  for (const auto& t : surface) {
    Vec3 n = cross(t.b - t.a, t.c - t.a);
    m += 0.5 * std::hypot(n.y, n.z);
  }
  return m;
}

Scenario crack2d(uint64_t seed) { return parse_scenario(Json{{"preset", {{"name", "crack"}, {"seed", seed}}}}); }
Scenario crack3d(uint64_t seed) { return parse_scenario(Json{{"preset", {{"name", "crack3d"}, {"seed", seed}}}}); }

Approx3DOptions options3d(const Scenario& s, int threads) {
  Approx3DOptions o;
  o.T = s.params.T;
  o.cover_radius = s.params.cover_radius;
  o.eta = s.params.eta;
  o.n_times = s.params.n_times;
  o.samples_per_circle = s.params.samples_per_circle;
  o.enforce_guard = s.params.enforce_guard;
  o.slack = s.params.slack;
  o.threads = threads;
  return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

Outcome criterion_approx_2d(int) {
  Tally t;
  const std::vector<double> Ts{0.5, 1.0, 2.0, 4.0};
  std::vector<double> C_energy, C_perimeter;
  double lowest_ratio = kInfinity;
  nlohmann::json rows = nlohmann::json::array();
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s = crack2d(seed);
    PiecewiseFunction2D u = s.function_2d();
    const Domain2D& d = u.domain();
    const Grid2D& g = u.grid();
    const auto segs = segments_of(u.curves());
    const double jump = length_in_rect(d, segs);
    const double energy_u = energy_on_rect(d, g, u.values(), u.p(), segs);
    double c_energy = 0, c_per = 0;
    std::vector<double> excess;
    for (double T : Ts) {
      Approx2DOptions o;
      o.T = T;
      o.cover_radius = s.params.cover_radius;
      o.n_times = s.params.n_times;
      o.eta = s.params.eta;
      o.samples_per_circle = std::max(s.params.samples_per_circle, 16);
      o.slack = s.params.slack;
      ApproxResult2D r = approximate_2d(u, o);
      const std::string tag = "seed " + std::to_string(seed) + ", T = " + fmt(T) + ": ";

      // w = u at nodes of S outside the open balls of omega.
      size_t changed = 0;
      for (size_t k = 0; k < g.size(); ++k) {
        Vec2 x = g.node(k);
        if (in_rect(d, x) && !in_open_disks(r.omega, x) && r.w.values()[k] != u.values()[k]) ++changed;
      }
      t.expect(changed == 0, tag + "w differs from u outside omega");

      // No jump of u is seen by a lattice edge of S outside the closed balls.
      size_t seen = 0;
      for (const auto& sg : segs) {
        Vec2 lo{std::min(sg.a.x, sg.b.x), std::min(sg.a.y, sg.b.y)};
        Vec2 hi{std::max(sg.a.x, sg.b.x), std::max(sg.a.y, sg.b.y)};
        edges_near(g, lo, hi, [&](Vec2 p, Vec2 q, bool, size_t) {
          if (!in_rect(d, p) || !in_rect(d, q)) return;
          if (auto x = edge_hit(p, q, sg.a, sg.b); x && !in_closed_disks(r.active_t0, *x)) ++seen;
        });
      }
      t.expect(seen == 0, tag + "a jump of u survives in w");
      t.expect(r.w.curves().empty() || length_in_rect(d, segments_of(r.w.curves())) == 0,
               tag + "w carries jump curves inside S");

      // Energies from the node values.
      const double energy_w = energy_on_rect(d, g, r.w.values(), u.p(), {});
      t.expect(rel(energy_w, r.energy_w) <= 1e-9, tag + "energy of w against the oracle");
      t.expect(rel(energy_u, r.energy_u) <= 1e-9, tag + "energy of u against the oracle");
      const double ratio = energy_w / energy_u;
      lowest_ratio = std::min(lowest_ratio, ratio);
      t.expect(ratio <= 1 + r.energy_constant / T, tag + "energy ratio above 1 + C/T");
      c_energy = std::max(c_energy, (ratio - 1) * T);
      excess.push_back(ratio - 1);

      // Perimeter of omega against e^T H^1(J_u).
      double per = 0;
      for (const auto& b : r.active_t0) per += 2 * std::numbers::pi * b.radius;
      double cover_sum = 0;
      for (const auto& b : r.cover) cover_sum += b.radius;
      t.expect(rel(per, r.perimeter) <= 1e-12, tag + "perimeter against the oracle");
      t.expect(rel(jump, r.jump_length) <= 1e-9, tag + "jump length against the oracle");
      const double pr = per / (std::exp(T) * jump);
      t.expect(pr <= 2 * std::numbers::pi * cover_sum / jump * (1 + 1e-9), tag + "perimeter above 2 pi C_cov e^T H^1");
      c_per = std::max(c_per, pr);
      rows.push_back({seed, T, r.t0, energy_w, energy_u, per, jump, r.omega.size()});
    }
    for (size_t k = 1; k < excess.size(); ++k)
      t.expect(excess[k] <= excess[k - 1] + 0.05 * std::abs(excess[k - 1]) + 1e-12,
               "seed " + std::to_string(seed) + ": energy excess grew along the T sweep");
    C_energy.push_back(c_energy);
    C_perimeter.push_back(c_per);
  }
  t.expect(stable_within_factor_2(C_energy), "energy constant not stable across scenarios");
  t.expect(stable_within_factor_2(C_perimeter), "perimeter constant not stable across scenarios");
  t.record("rows", rows);
  return t.finish("10 cracks x T in {0.5,1,2,4}; energy ratio >= " + fmt(lowest_ratio) + ", max (ratio-1) T = " +
                  fmt(max_of(C_energy)) +
                  ", max Per/(e^T H^1) = " + fmt(max_of(C_perimeter)));
}

Outcome criterion_approx_3d(int threads) {
  Tally t;
  std::vector<double> vol, per2, per3;
  nlohmann::json rows = nlohmann::json::array();
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s = crack3d(seed);
    Function3D u = s.function_3d();
    ApproxResult3D r = approximate_3d(u, options3d(s, threads));
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    const Domain2D& d = u.domain();
    const Grid2D& g = u.slice(0).grid();
    const int n = u.slice_count();
    const double delta = u.thickness();

    const double transverse = transverse_mass(u.surface());
    t.expect(rel(transverse, r.rescaled.transverse) <= 1e-9, tag + "transverse mass against the oracle");

    // Markov bound on inadmissible slices, in exact arithmetic.
    int bad = 0;
    double sums = 0;
    for (int k = 0; k < n; ++k) {
      double sk = 0;
      for (const auto& b : r.family.slices[k]) sk += b.radius;
      sums += sk;
      bool adm = sk <= r.eta;
      t.expect(adm == static_cast<bool>(r.omega.admissible[k]), tag + "admissible slice flags");
      bad += adm ? 0 : 1;
    }
    t.expect(bad * r.eta <= sums, tag + "Markov bound on inadmissible slices");
    t.expect(rel(bad * delta, r.omega.inadmissible_measure) <= 1e-12 || bad == 0,
             tag + "inadmissible measure against the count");
    t.expect(r.omega.inadmissible_measure <= r.markov_bound, tag + "inadmissible measure above the bound");

    // Mask, exactness and jump-freeness slice by slice.
    std::vector<uint8_t> mask(static_cast<size_t>(n) * g.size(), 0);
    size_t changed = 0, seen = 0;
    for (int k = 0; k < n; ++k) {
      uint8_t* m = &mask[static_cast<size_t>(k) * g.size()];
      const auto& disks = r.omega.disks[k];
      for (size_t q = 0; q < g.size(); ++q) {
        Vec2 x = g.node(q);
        if (!r.omega.admissible[k]) {
          m[q] = in_rect(d, x);
          continue;
        }
        m[q] = in_open_disks(disks, x);
        if (in_rect(d, x) && !m[q] && r.w.slice(k).values()[q] != u.slice(k).values()[q]) ++changed;
      }
      if (!r.omega.admissible[k]) continue;
      for (const auto& tri : u.surface()) {
        auto sg = section(tri, u.slice_center(k));
        if (!sg) continue;
        Vec2 lo{std::min(sg->a.x, sg->b.x), std::min(sg->a.y, sg->b.y)};
        Vec2 hi{std::max(sg->a.x, sg->b.x), std::max(sg->a.y, sg->b.y)};
        edges_near(g, lo, hi, [&](Vec2 p, Vec2 q, bool, size_t) {
          if (!in_rect(d, p) || !in_rect(d, q)) return;
          if (auto x = edge_hit(p, q, sg->a, sg->b); x && !in_closed_disks(disks, *x)) ++seen;
        });
      }
    }
    t.expect(changed == 0, tag + "w differs from u outside omega on an admissible slice");
    t.expect(seen == 0, tag + "a jump of u survives in w on an admissible slice");
    size_t mismatch = 0;
    for (size_t k = 0; k < mask.size(); ++k) mismatch += mask[k] != r.omega.mask[k];
    t.expect(mismatch == 0, tag + "omega mask against the disks");

    // Volume over S' and directional perimeters from the mask.
    const double m = d.margin;
    double volume = 0, p2 = 0, p3 = 0;
    for (int k = 0; k < n; ++k) {
      const uint8_t* mk = &mask[static_cast<size_t>(k) * g.size()];
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          size_t q = g.index(i, j);
          Vec2 x = g.node(i, j);
          if (mk[q])
            volume += delta * overlap(x.x - g.h / 2, x.x + g.h / 2, d.lo.x - m, d.hi.x + m) *
                      overlap(x.y - g.h / 2, x.y + g.h / 2, d.lo.y - m, d.hi.y + m);
          if (i + 1 < g.nx && mk[q] != mk[q + 1]) p2 += g.h * delta;
          if (j + 1 < g.ny && mk[q] != mk[g.index(i, j + 1)]) p3 += g.h * delta;
        }
    }
    t.expect(rel(volume, r.omega.volume) <= 1e-9, tag + "volume against the oracle");
    t.expect(rel(p2, r.omega.perimeter[1]) <= 1e-9 && rel(p3, r.omega.perimeter[2]) <= 1e-9,
             tag + "directional perimeters against the oracle");
    const double scale = std::exp(r.T) * transverse;
    vol.push_back(volume / scale);
    per2.push_back(p2 / scale);
    per3.push_back(p3 / scale);
    rows.push_back({seed, r.t0, volume, p2, p3, transverse, bad, sums, r.eta});
  }
  t.expect(stable_within_factor_2(vol), "volume ratio not stable across scenarios");
  t.expect(stable_within_factor_2(per2), "x2-perimeter ratio not stable across scenarios");
  t.expect(stable_within_factor_2(per3), "x3-perimeter ratio not stable across scenarios");
  t.record("rows", rows);
  return t.finish("10 tilted cracks; max volume ratio " + fmt(max_of(vol)) + ", max perimeter ratios " +
                  fmt(max_of(per2)) + " / " + fmt(max_of(per3)));
}

Outcome criterion_poincare(int threads) {
  Tally t;
  std::vector<double> C;
  nlohmann::json rows = nlohmann::json::array();
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Scenario s = crack3d(seed);
    Function3D u = s.function_3d();
    ApproxResult3D r = approximate_3d(u, options3d(s, threads));
    PoincareResult pr = poincare_profile(u, r.w, r.omega);
    const Domain2D& d = u.domain();
    const Grid2D& g = u.slice(0).grid();
    const double p = u.p();
    double error = 0;
    for (int k = 0; k < u.slice_count(); ++k) {
      const auto& wv = r.w.slice(k).values();
      const auto& uv = u.slice(k).values();
      double s_w = 0, s_m = 0, lo = kInfinity, hi = -kInfinity;
      std::vector<double> wgt(g.size());
      for (size_t q = 0; q < g.size(); ++q) {
        Vec2 x = g.node(q);
        wgt[q] = overlap(x.x - g.h / 2, x.x + g.h / 2, d.lo.x, d.hi.x) *
                 overlap(x.y - g.h / 2, x.y + g.h / 2, d.lo.y, d.hi.y);
        if (wgt[q] <= 0) continue;
        s_w += wgt[q] * wv[q], s_m += wgt[q];
        lo = std::min(lo, wv[q]), hi = std::max(hi, wv[q]);
      }
      double a = std::clamp(s_w / s_m, lo, hi);
      for (size_t q = 0; q < g.size(); ++q)
        if (wgt[q] > 0 && !r.omega.in(k, q)) error += u.thickness() * wgt[q] * std::pow(std::abs(uv[q] - a), p);
    }
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    t.expect(rel(error, pr.error) <= 1e-9, tag + "Poincare error against the oracle");
    t.expect(pr.spatial_energy > 0, tag + "vanishing spatial energy");
    C.push_back(error / pr.spatial_energy);
    rows.push_back({seed, error, pr.spatial_energy});
  }
  t.expect(stable_within_factor_2(C), "Poincare constant not stable across scenarios");

  // Functions of x1 alone: the error vanishes exactly.
  Scenario base = crack3d(1);
  Domain2D d = base.domain;
  const std::vector<std::function<double(double)>> fs{
      [](double x) { return std::sin(3 * x); }, [](double x) { return x * x - 0.3; },
      [](double x) { return std::exp(x) * (x > 0.4 ? 2.0 : 1.0); }};
  int zeros = 0;
  for (const auto& f : fs) {
    Function3D v = Function3D::sample(d, 0, 1, 32, 2, [&](double x1, Vec2) { return f(x1); }, {});
    ApproxResult3D r = approximate_3d(v, options3d(base, threads));
    PoincareResult pr = poincare_profile(v, r.w, r.omega);
    t.expect(pr.error == 0.0, "function of x1 with a nonzero Poincare error");
    zeros += pr.error == 0.0;
  }
  t.record("rows", rows);
  return t.finish("10 tilted cracks, max error / energy " + fmt(max_of(C)) + "; " + std::to_string(zeros) +
                  "/3 functions of x1 with zero error");
}

}  // namespace sbv::acceptance
