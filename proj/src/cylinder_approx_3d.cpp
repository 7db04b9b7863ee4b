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

#include "cylinder_approx_3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace sbv {

namespace {

double pw(double x, double p) { return p == 2 ? x * x : std::pow(std::abs(x), p); }

// Convex polygon of the triangle inside lo <= x1 <= hi.
std::vector<Vec3> clip_to_slab(const Triangle3& t, double lo, double hi) {
  std::vector<Vec3> poly{t.a, t.b, t.c};
  auto clip = [&](double c, double sign) {
    std::vector<Vec3> out;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      Vec3 p = poly[i], q = poly[(i + 1) % n];
      double fp = sign * (p.x - c), fq = sign * (q.x - c);
      if (fp >= 0) out.push_back(p);
      if ((fp >= 0) != (fq >= 0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
    }
    poly = std::move(out);
  };
  clip(lo, 1);
  if (!poly.empty()) clip(hi, -1);
  return poly;
}

// Separating-axis test between a convex point set and an axis-aligned square.
bool meets_square(const std::vector<Vec2>& poly, Vec2 c, double half) {
  auto overlap = [&](Vec2 axis) {
    double lo = kInfinity, hi = -kInfinity;
    for (Vec2 q : poly) {
      double s = dot(q - c, axis);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    double r = half * (std::abs(axis.x) + std::abs(axis.y));
    return lo <= r * (1 + 1e-12) && hi >= -r * (1 + 1e-12);
  };
  if (!overlap({1, 0}) || !overlap({0, 1})) return false;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = poly[(i + 1) % n] - poly[i];
    if (norm(e) < 1e-14) continue;
    if (!overlap({-e.y, e.x})) return false;
  }
  return true;
}

}  // namespace

Rescaled anisotropic_rescale(const std::vector<Triangle3>& surface) {
  Rescaled r;
  r.area = jump_mass(surface, JumpWeight::kFull);
  r.transverse = jump_mass(surface, JumpWeight::kTransverse);
  if (!(r.area > 0) || !(r.transverse > 1e-14 * r.area)) return r;
  r.delta = r.transverse / r.area;
  r.surface.reserve(surface.size());
  auto map = [&](Vec3 v) { return Vec3{v.x, r.delta * v.y, r.delta * v.z}; };
  for (const auto& t : surface) r.surface.push_back({map(t.a), map(t.b), map(t.c)});
  r.rescaled_area = jump_mass(r.surface, JumpWeight::kFull);
  return r;
}

std::vector<Ball3> layered_cover(const std::vector<Triangle3>& surface, double rho) {
  if (!(rho > 0)) throw InvalidArgument("cover_radius: must be positive");
  std::vector<Ball3> out;
  if (surface.empty()) return out;
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& t : surface)
    for (Vec3 v : {t.a, t.b, t.c}) {
      lo = std::min(lo, v.x);
      hi = std::max(hi, v.x);
    }
  // A slab of half-width rho/2 and a square of half-diagonal rho sqrt(3)/2
  // fit inside a ball of radius rho.
  const double s = rho;
  const double sigma = 0.99 * std::sqrt(1.5) * rho;
  const int layers = std::max(1, static_cast<int>(std::ceil((hi - lo) / s - 1e-12)));
  for (int k = 0; k < layers; ++k) {
    double L = lo + (k + 0.5) * s;
    std::set<std::pair<long, long>> cells;
    for (const auto& t : surface) {
      auto poly3 = clip_to_slab(t, L - s / 2, L + s / 2);
      if (poly3.empty()) continue;
      std::vector<Vec2> poly;
      double ymin = kInfinity, ymax = -kInfinity, zmin = kInfinity, zmax = -kInfinity;
      for (Vec3 v : poly3) {
        poly.push_back({v.y, v.z});
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
        zmin = std::min(zmin, v.z);
        zmax = std::max(zmax, v.z);
      }
      long i0 = std::lround(std::floor(ymin / sigma + 0.5)), i1 = std::lround(std::floor(ymax / sigma + 0.5));
      long j0 = std::lround(std::floor(zmin / sigma + 0.5)), j1 = std::lround(std::floor(zmax / sigma + 0.5));
      for (long i = i0; i <= i1; ++i)
        for (long j = j0; j <= j1; ++j)
          if (!cells.count({i, j}) && meets_square(poly, {i * sigma, j * sigma}, sigma / 2))
            cells.insert({i, j});
    }
    for (auto [i, j] : cells)
      out.push_back({{L, i * sigma, j * sigma}, rho, static_cast<int>(out.size())});
  }
  return out;
}

CylinderFamily build_cylinders(const Function3D& u, const Rescaled& r, double rho) {
  CylinderFamily fam;
  const int n = u.slice_count();
  fam.slices.assign(static_cast<size_t>(n), {});
  fam.slice_sums.assign(static_cast<size_t>(n), 0.0);
  fam.delta = r.delta;
  if (r.degenerate()) return fam;
  fam.rho = rho > 0 ? rho : std::max(u.thickness() / 2, std::sqrt(r.rescaled_area / 4000));
  fam.cover = layered_cover(r.surface, fam.rho);
  for (const auto& b : fam.cover) {
    Cylinder c;
    c.x1_lo = b.center.x - fam.rho;
    c.x1_hi = b.center.x + fam.rho;
    c.base = {{b.center.y / r.delta, b.center.z / r.delta}, fam.rho / r.delta, b.id};
    fam.cylinders.push_back(c);
  }
  for (int k = 0; k < n; ++k) {
    double x = u.slice_center(k);
    for (const auto& c : fam.cylinders)
      if (x > c.x1_lo && x < c.x1_hi) {
        fam.slices[k].push_back(c.base);
        fam.slice_sums[k] += c.base.radius;
      }
    fam.integral += u.thickness() * fam.slice_sums[k];
  }
  return fam;
}

std::vector<uint8_t> admissible_slices(const CylinderFamily& fam, double eta) {
  std::vector<uint8_t> ok(fam.slice_sums.size());
  for (size_t k = 0; k < ok.size(); ++k) ok[k] = fam.slice_sums[k] <= eta ? 1 : 0;
  return ok;
}

ExceptionalSet3D exceptional_set(const Function3D& u, const std::vector<uint8_t>& admissible,
                                 std::vector<std::vector<Ball>> disks, double time) {
  const Domain2D& d = u.domain();
  const Grid2D& g = u.slice(0).grid();
  const int n = u.slice_count();
  const double delta = u.thickness(), h = g.h;
  ExceptionalSet3D e;
  e.admissible = admissible;
  e.disks = std::move(disks);
  e.disks.resize(static_cast<size_t>(n));
  e.time = time;
  e.nodes = static_cast<int>(g.size());
  e.mask.assign(static_cast<size_t>(n) * g.size(), 0);
  std::vector<uint8_t> inS(g.size());
  for (size_t q = 0; q < g.size(); ++q) inS[q] = d.in_S(g.node(q)) ? 1 : 0;
  auto nwS = d.node_weights(Region::kS);
  auto nwE = d.node_weights(Region::kExtended);
  for (int k = 0; k < n; ++k) {
    uint8_t* m = &e.mask[static_cast<size_t>(k) * g.size()];
    if (!admissible[k]) {
      for (size_t q = 0; q < g.size(); ++q) m[q] = inS[q];
      e.inadmissible_measure += delta;
      continue;
    }
    for (const auto& b : e.disks[k]) {
      e.sum_radii_integral += delta * b.radius;
      int i0 = std::max(0, static_cast<int>(std::floor((b.center.x - b.radius - g.origin.x) / h)));
      int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((b.center.x + b.radius - g.origin.x) / h)));
      int j0 = std::max(0, static_cast<int>(std::floor((b.center.y - b.radius - g.origin.y) / h)));
      int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((b.center.y + b.radius - g.origin.y) / h)));
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
          if (distance(g.node(i, j), b.center) < b.radius * (1 - 1e-12)) m[g.index(i, j)] = 1;
    }
  }
  for (int k = 0; k < n; ++k) {
    const uint8_t* m = &e.mask[static_cast<size_t>(k) * g.size()];
    for (size_t q = 0; q < g.size(); ++q) {
      if (!m[q]) continue;
      e.volume += delta * nwE[q];
      e.volume_in_S += delta * nwS[q];
    }
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        size_t q = g.index(i, j);
        if (i + 1 < g.nx && m[q] != m[q + 1]) e.perimeter[1] += h * delta;
        if (j + 1 < g.ny && m[q] != m[g.index(i, j + 1)]) e.perimeter[2] += h * delta;
        if (k + 1 < n && m[q] != m[q + g.size()]) e.perimeter[0] += h * h;
      }
  }
  return e;
}

std::vector<ConstructionTrace> sliced_construction(const CylinderFamily& fam,
                                                   const std::vector<uint8_t>& admissible,
                                                   double T, int threads) {
  const int n = static_cast<int>(fam.slices.size());
  std::vector<ConstructionTrace> traces(static_cast<size_t>(n));
  parallel_for(n, threads, [&](int k) {
    if (admissible[k] && !fam.slices[k].empty()) traces[k] = run_construction(fam.slices[k], T);
  });
  return traces;
}

namespace {

// Moves each time off every event of every trace.
std::vector<double> avoid_events(std::vector<double> times,
                                 const std::vector<ConstructionTrace>& traces) {
  std::vector<double> ev;
  for (const auto& tr : traces) {
    auto e = tr.event_times();
    ev.insert(ev.end(), e.begin(), e.end());
  }
  std::sort(ev.begin(), ev.end());
  for (double& t : times) {
    for (int guard = 0; guard < 1000; ++guard) {
      auto it = std::lower_bound(ev.begin(), ev.end(), t - 1e-9);
      if (it == ev.end() || *it > t + 1e-9) break;
      t = *it + 2e-9;
    }
  }
  return times;
}

}  // namespace

ApproxResult3D approximate_3d(const Function3D& u, const Approx3DOptions& opt) {
  const Domain2D& d = u.domain();
  d.validate();
  if (!(opt.T > 0)) throw InvalidArgument("T: horizon must be positive");
  if (opt.n_times < 1) throw InvalidArgument("n_times: must be positive");
  const int n = u.slice_count();
  const double delta = u.thickness(), p = u.p();
  ApproxResult3D r;
  r.T = opt.T;

  std::vector<PiecewiseFunction2D> Us(static_cast<size_t>(n));
  std::vector<std::vector<std::string>> notes(static_cast<size_t>(n));
  parallel_for(n, opt.threads, [&](int k) {
    Extension e = extend(u.slice(k));
    Us[k] = std::move(e.U);
    notes[k] = std::move(e.warnings);
  });
  for (const auto& w : notes)
    for (const auto& s : w)
      if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end())
        r.warnings.push_back(s);
  r.energy_u_spatial = dirichlet_energy(u, Derivative::kSpatial);
  r.rescaled = anisotropic_rescale(u.surface());
  std::vector<uint8_t> admissible(static_cast<size_t>(n), 1);

  if (r.rescaled.degenerate()) {
    r.U = Function3D(u.a(), u.b(), Us, u.surface());
    r.w = u;
    r.t0 = opt.T / 2;
    r.family = build_cylinders(u, r.rescaled, opt.cover_radius);
    r.traces.assign(static_cast<size_t>(n), {});
    r.omega = exceptional_set(u, admissible, {}, r.t0);
    r.grown = exceptional_set(u, admissible, {}, opt.T);
    r.profile = {{r.t0, 0.0}};
    for (int k = 0; k < n; ++k) r.energy_U_spatial += delta * dirichlet_energy(Us[k], Region::kExtended);
    r.energy_w_spatial = r.energy_u_spatial;
    return r;
  }

  r.family = build_cylinders(u, r.rescaled, opt.cover_radius);
  r.eta = opt.eta > 0 ? opt.eta : d.margin * std::exp(-opt.T) / 2;
  r.cylinder_constant = r.family.integral / r.rescaled.transverse;
  r.markov_bound = r.family.integral / r.eta;
  if (opt.enforce_guard && r.family.integral > r.eta) {
    double t_max = std::log(d.margin / (2 * r.family.integral));
    std::ostringstream os;
    os << "jump set too large: cylinder radii integrate to " << r.family.integral
       << " over I, above the budget eta = " << r.eta << " (transverse mass "
       << r.rescaled.transverse << ", cylinder constant " << r.cylinder_constant
       << "); largest admissible T = " << t_max;
    throw JumpSetTooLarge(os.str(), t_max, r.eta);
  }
  admissible = admissible_slices(r.family, r.eta);
  r.traces = sliced_construction(r.family, admissible, opt.T, opt.threads);

  // Shared t0 from the slice-aggregated boundary profile.
  std::vector<double> times(static_cast<size_t>(opt.n_times));
  for (int k = 0; k < opt.n_times; ++k) times[k] = (k + 0.5) * opt.T / opt.n_times;
  times = avoid_events(std::move(times), r.traces);
  std::vector<std::vector<ProfilePoint>> prof(static_cast<size_t>(n));
  std::vector<double> slice_energy(static_cast<size_t>(n), 0.0);
  parallel_for(n, opt.threads, [&](int k) {
    if (!admissible[k]) return;
    slice_energy[k] = dirichlet_energy(Us[k], Region::kExtended);
    if (!r.traces[k].initial_balls().empty())
      prof[k] = boundary_energy_profile(r.traces[k], gradient_density(Us[k]), times,
                                        opt.samples_per_circle);
  });
  r.profile.resize(times.size());
  for (size_t i = 0; i < times.size(); ++i) r.profile[i].time = times[i];
  for (int k = 0; k < n; ++k) {
    r.energy_U_spatial += delta * slice_energy[k];
    for (size_t i = 0; i < prof[k].size(); ++i) r.profile[i].value += delta * prof[k][i].value;
  }
  size_t best = 0;
  for (size_t i = 1; i < r.profile.size(); ++i)
    if (r.profile[i].value < r.profile[best].value) best = i;
  r.t0 = r.profile[best].time;
  r.profile_at_t0 = r.profile[best].value;
  r.profile_bound = 4 / opt.T * r.energy_U_spatial;
  if (r.profile_at_t0 > r.profile_bound * (1 + opt.slack) + 1e-14)
    r.warnings.push_back("aggregated profile at t0 exceeds the factor-4 budget");

  // Per-slice fill.
  std::vector<PiecewiseFunction2D> ws(static_cast<size_t>(n));
  std::vector<std::vector<Ball>> meet(static_cast<size_t>(n)), grown(static_cast<size_t>(n));
  std::vector<int> crossings(static_cast<size_t>(n), 0);
  std::vector<std::string> escape(static_cast<size_t>(n));
  std::vector<std::vector<std::string>> fill_notes(static_cast<size_t>(n));
  parallel_for(n, opt.threads, [&](int k) {
    if (!admissible[k]) {
      ws[k] = PiecewiseFunction2D(d, p, std::vector<double>(Us[k].values().size(), 0.0), {}, true);
      return;
    }
    if (r.traces[k].initial_balls().empty()) {
      ws[k] = Us[k];
      return;
    }
    grown[k] = r.traces[k].active(opt.T);
    for (const auto& b : r.traces[k].active(r.t0)) {
      double dist = d.distance_to_S(b.center);
      if (dist >= b.radius) continue;
      if (dist + b.radius > d.margin * (1 + 1e-12)) {
        std::ostringstream os;
        os << "slice " << k << ": ball " << b.id << " of radius " << b.radius
           << " leaves the extended domain at t0 = " << r.t0;
        escape[k] = os.str();
        return;
      }
      meet[k].push_back(b);
    }
    Stitch st = fill_balls(Us[k], meet[k], opt.slack);
    crossings[k] = st.crossings;
    fill_notes[k] = std::move(st.warnings);
    ws[k] = PiecewiseFunction2D(d, p, std::move(st.values), std::move(st.residual), true);
  });
  for (int k = 0; k < n; ++k)
    if (!escape[k].empty())
      throw JumpSetTooLarge(escape[k], std::log(d.margin / (2 * r.family.integral)), r.eta);
  for (int k = 0; k < n; ++k) {
    r.trace_crossings += crossings[k];
    for (const auto& s : fill_notes[k])
      if (std::find(r.warnings.begin(), r.warnings.end(), s) == r.warnings.end())
        r.warnings.push_back(s);
  }
  r.U = Function3D(u.a(), u.b(), std::move(Us), u.surface());
  r.w = Function3D(u.a(), u.b(), std::move(ws), {});
  r.omega = exceptional_set(u, admissible, std::move(meet), r.t0);
  r.grown = exceptional_set(u, admissible, std::move(grown), opt.T);
  r.zeroed_measure = r.omega.inadmissible_measure;
  r.energy_w_spatial = dirichlet_energy(r.w, Derivative::kSpatial);

  const Grid2D& g = u.slice(0).grid();
  std::vector<uint8_t> inS(g.size());
  for (size_t q = 0; q < g.size(); ++q) inS[q] = d.in_S(g.node(q)) ? 1 : 0;
  for (int k = 0; k < n; ++k) {
    if (!admissible[k]) continue;
    const auto& wv = r.w.slice(k).values();
    const auto& uv = u.slice(k).values();
    for (size_t q = 0; q < g.size(); ++q)
      if (inS[q] && !r.omega.in(k, q) && wv[q] != uv[q]) ++r.changed_outside_omega;
    const CutEdges& cuts = r.w.slice(k).cuts();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        size_t q = g.index(i, j);
        if (!inS[q]) continue;
        if (i + 1 < g.nx && cuts.horizontal[q] && inS[q + 1]) ++r.residual_cut_edges;
        if (j + 1 < g.ny && cuts.vertical[q] && inS[g.index(i, j + 1)]) ++r.residual_cut_edges;
      }
  }
  return r;
}

PoincareResult poincare_profile(const Function3D& u, const Function3D& w,
                                const ExceptionalSet3D& omega) {
  const Domain2D& d = u.domain();
  const int n = u.slice_count();
  if (w.slice_count() != n || !(w.slice(0).grid() == u.slice(0).grid()))
    throw InvalidArgument("poincare_profile: u and w must share slices and lattice");
  auto nw = d.node_weights(Region::kS);
  const double p = u.p(), delta = u.thickness();
  PoincareResult out;
  out.profile.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto& wv = w.slice(k).values();
    double s = 0, m = 0, lo = kInfinity, hi = -kInfinity;
    for (size_t q = 0; q < nw.size(); ++q) {
      if (nw[q] <= 0) continue;
      s += nw[q] * wv[q];
      m += nw[q];
      lo = std::min(lo, wv[q]);
      hi = std::max(hi, wv[q]);
    }
    double a = m > 0 ? std::clamp(s / m, lo, hi) : 0.0;
    out.profile[k] = a;
    const auto& uv = u.slice(k).values();
    double e = 0;
    for (size_t q = 0; q < nw.size(); ++q)
      if (nw[q] > 0 && !omega.in(k, q)) e += nw[q] * pw(uv[q] - a, p);
    out.error += delta * e;
  }
  out.spatial_energy = dirichlet_energy(u, Derivative::kSpatial);
  out.ratio = out.spatial_energy > 0 ? out.error / out.spatial_energy
              : out.error > 0         ? kInfinity
                                      : 0.0;
  return out;
}

std::vector<Triangle3> cylinder_surface(double x_lo, double x_hi, Vec2 c, double r, int segments,
                                        bool caps) {
  if (segments < 8) throw InvalidArgument("segments: at least 8 are required");
  const int N = segments;
  const double pi = std::numbers::pi;
  const double R_side = r * (pi / N) / std::sin(pi / N);
  const double R_cap = r * std::sqrt(2 * pi / (N * std::sin(2 * pi / N)));
  auto at = [&](double R, int j) {
    double phi = 2 * pi * (j % N) / N;
    return c + Vec2{std::cos(phi), std::sin(phi)} * R;
  };
  std::vector<Triangle3> s;
  for (int j = 0; j < N; ++j) {
    if (x_hi > x_lo) {
      Vec2 p0 = at(R_side, j), p1 = at(R_side, j + 1);
      Vec3 a0{x_lo, p0.x, p0.y}, a1{x_lo, p1.x, p1.y}, b0{x_hi, p0.x, p0.y}, b1{x_hi, p1.x, p1.y};
      s.push_back({a0, a1, b1});
      s.push_back({a0, b1, b0});
    }
    if (caps) {
      Vec2 q0 = at(R_cap, j), q1 = at(R_cap, j + 1);
      s.push_back({{x_lo, c.x, c.y}, {x_lo, q1.x, q1.y}, {x_lo, q0.x, q0.y}});
      if (x_hi > x_lo) s.push_back({{x_hi, c.x, c.y}, {x_hi, q0.x, q0.y}, {x_hi, q1.x, q1.y}});
    }
  }
  return s;
}

std::vector<Triangle3> plane_surface(const Domain2D& d, double x1, int segments) {
  std::vector<Triangle3> out;
  if (d.shape == DomainShape::kRectangle) {
    Vec3 a{x1, d.lo.x, d.lo.y}, b{x1, d.hi.x, d.lo.y}, c{x1, d.hi.x, d.hi.y}, e{x1, d.lo.x, d.hi.y};
    out.push_back({a, b, c});
    out.push_back({a, c, e});
    return out;
  }
  if (segments < 8) throw InvalidArgument("segments: at least 8 are required");
  const double pi = std::numbers::pi;
  const double R = d.radius / std::cos(pi / segments);
  Vec3 c{x1, d.center.x, d.center.y};
  for (int s = 0; s < segments; ++s) {
    double t0 = 2 * pi * s / segments, t1 = 2 * pi * (s + 1) / segments;
    out.push_back({c, {x1, c.y + R * std::cos(t0), c.z + R * std::sin(t0)},
                   {x1, c.y + R * std::cos(t1), c.z + R * std::sin(t1)}});
  }
  return out;
}

Function3D counterexample_family(CounterexampleKind kind, double h,
                                 const CounterexampleOptions& opt) {
  if (!(h > 0 && h < 0.5)) throw InvalidArgument("h: must lie in (0, 1/2)");
  Domain2D d;
  d.shape = DomainShape::kDisk;
  d.center = {0, 0};
  d.radius = 1.0;
  d.margin = opt.margin;
  d.h = opt.grid;
  d.extension = ExtensionMode::kGiven;
  const bool a = kind == CounterexampleKind::kA;
  const double rad = a ? 0.5 : h;
  const double x_lo = a ? -h / 2 : -1.0, x_hi = a ? h / 2 : 1.0;
  // Values, walls and caps all use the perimeter-preserving polygon, so
  // lattice nodes on the circle r = 1/2 agree with the jump geometry.
  const int N = opt.segments;
  const double pi = std::numbers::pi;
  const double R = rad * (pi / N) / std::sin(pi / N);
  auto surface = cylinder_surface(x_lo, x_hi, {0, 0}, rad, N, false);
  if (a)
    for (int j = 0; j < N; ++j) {
      double p0 = 2 * pi * j / N, p1 = 2 * pi * (j + 1) / N;
      Vec2 q0{R * std::cos(p0), R * std::sin(p0)}, q1{R * std::cos(p1), R * std::sin(p1)};
      surface.push_back({{x_lo, 0, 0}, {x_lo, q1.x, q1.y}, {x_lo, q0.x, q0.y}});
      surface.push_back({{x_hi, 0, 0}, {x_hi, q0.x, q0.y}, {x_hi, q1.x, q1.y}});
    }
  auto in_polygon = [=](Vec2 q) {
    double phi = std::atan2(q.y, q.x);
    if (phi < 0) phi += 2 * pi;
    int j = std::min(N - 1, static_cast<int>(phi / (2 * pi / N)));
    double mid = (j + 0.5) * 2 * pi / N;
    return q.x * std::cos(mid) + q.y * std::sin(mid) < R * std::cos(pi / N);
  };
  auto f = [=](double x1, Vec2 q) {
    bool inside = in_polygon(q) && (!a || std::abs(x1) < h / 2);
    return inside ? 0.0 : 1.0;
  };
  return Function3D::sample(d, -1.0, 1.0, opt.slices, opt.p, f, std::move(surface));
}

StripSet strip_exceptional(const PiecewiseFunction2D& u) {
  const Domain2D& d = u.domain();
  const Grid2D& g = u.grid();
  StripSet s;
  double xlo = d.shape == DomainShape::kRectangle ? d.lo.x : d.center.x - d.radius;
  double xhi = d.shape == DomainShape::kRectangle ? d.hi.x : d.center.x + d.radius;
  std::vector<std::pair<double, double>> iv;
  std::vector<double> points;  // segments normal to x1 project to a point
  for (const auto& c : restrict_to_S(u.curves(), d))
    for (size_t k = 0; k < c.segment_count(); ++k) {
      Segment2 seg = c.segment(k);
      s.bound += std::abs(seg.b.x - seg.a.x);
      double lo = std::max(xlo, std::min(seg.a.x, seg.b.x));
      double hi = std::min(xhi, std::max(seg.a.x, seg.b.x));
      if (hi > lo) iv.push_back({lo, hi});
      else if (hi == lo) points.push_back(lo);
    }
  std::sort(iv.begin(), iv.end());
  for (const auto& x : iv) {
    if (!s.intervals.empty() && x.first <= s.intervals.back().second)
      s.intervals.back().second = std::max(s.intervals.back().second, x.second);
    else
      s.intervals.push_back(x);
  }
  // Area of S over an x1-interval.
  auto column_area = [&](double lo, double hi) {
    if (d.shape == DomainShape::kRectangle) return (hi - lo) * (d.hi.y - d.lo.y);
    const double R = d.radius;
    auto F = [&](double x) {
      double t = std::clamp((x - d.center.x) / R, -1.0, 1.0);
      return R * R * (t * std::sqrt(1 - t * t) + std::asin(t));
    };
    return F(hi) - F(lo);
  };
  for (const auto& x : s.intervals) s.area += column_area(x.first, x.second);
  s.columns.assign(static_cast<size_t>(std::max(0, g.nx - 1)), 0);
  for (int i = 0; i + 1 < g.nx; ++i) {
    double a = g.origin.x + i * g.h, b = a + g.h;
    for (const auto& x : s.intervals)
      if (x.first < b && x.second > a) s.columns[i] = 1;
    for (double x : points)
      if (x >= a && (x < b || i + 2 == g.nx)) s.columns[i] = 1;
  }
  auto node_in = [&](int i, int j) {
    double x = g.node(i, j).x;
    if (!d.in_S(g.node(i, j))) return false;
    for (const auto& v : s.intervals)
      if (x >= v.first && x <= v.second) return true;
    return false;
  };
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (d.in_S(g.node(i, j)) && d.in_S(g.node(i, j + 1)) && node_in(i, j) != node_in(i, j + 1))
        s.perimeter_x2 += g.h;
  return s;
}

}  // namespace sbv
