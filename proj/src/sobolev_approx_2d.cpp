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

#include "sobolev_approx_2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace sbv {

namespace {

constexpr double kPi = std::numbers::pi;

// 4-point Gauss-Legendre on [0,1].
constexpr double kGaussX[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                               0.9305681557970263};
constexpr double kGaussW[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                               0.1739274225687269};

double pw(double x, double p) { return p == 2 ? x * x : std::pow(std::abs(x), p); }

}  // namespace

double radial_fill_constant(double p) { return 1 + std::pow(kPi, p + 1); }

double RadialPatch::value(Vec2 x) const {
  const int M = static_cast<int>(trace.size());
  Vec2 d = x - ball.center;
  double theta = std::min(1.0, norm(d) / ball.radius);
  double phi = std::atan2(d.y, d.x);
  if (phi < 0) phi += 2 * kPi;
  double s = phi / (2 * kPi) * M;
  int k = std::min(static_cast<int>(s), M - 1);
  double f = s - k;
  double g = (1 - f) * trace[k] + f * trace[(k + 1) % M];
  return (1 - theta) * mean + theta * g;
}

RadialPatch radial_fill_from_trace(const Ball& ball, std::vector<double> trace, double p) {
  if (trace.size() < 3) throw InvalidArgument("radial_fill: need at least three trace samples");
  if (!(ball.radius > 0)) throw InvalidArgument("radial_fill: radius must be positive");
  RadialPatch out;
  out.ball = ball;
  out.trace = std::move(trace);
  const size_t M = out.trace.size();
  const double dphi = 2 * kPi / M;
  double m = 0;
  for (double g : out.trace) m += g;
  m /= M;
  out.mean = m;
  // On each arc the trace is linear: w has radial derivative (g - m)/r and
  // tangential derivative g'/r, so |grad w|^p integrates in closed form in rho.
  double patch = 0, boundary = 0;
  for (size_t k = 0; k < M; ++k) {
    double g0 = out.trace[k], g1 = out.trace[(k + 1) % M];
    double slope = (g1 - g0) / dphi;
    boundary += pw(slope, p) * dphi;
    double acc = 0;
    for (int q = 0; q < 4; ++q) {
      double v = g0 + (g1 - g0) * kGaussX[q] - m;
      double s2 = v * v + slope * slope;
      acc += kGaussW[q] * (p == 2 ? s2 : std::pow(s2, p / 2));
    }
    patch += acc * dphi;
  }
  double scale = std::pow(ball.radius, 2 - p);
  out.patch_energy = 0.5 * scale * patch;
  out.boundary_energy = scale * boundary;
  return out;
}

RadialPatch radial_fill(const PiecewiseFunction2D& U, const Ball& ball, int samples) {
  int M = samples > 0 ? samples
                      : std::max(16, 4 * static_cast<int>(std::ceil(2 * kPi * ball.radius /
                                                                     U.grid().h)));
  std::vector<Vec2> pts(static_cast<size_t>(M));
  std::vector<double> trace(static_cast<size_t>(M));
  for (int k = 0; k < M; ++k) {
    double phi = 2 * kPi * k / M;
    pts[k] = ball.center + Vec2{std::cos(phi), std::sin(phi)} * ball.radius;
    trace[k] = U.evaluate(pts[k]);
  }
  RadialPatch out = radial_fill_from_trace(ball, std::move(trace), U.p());
  for (int k = 0; k < M; ++k)
    if (U.crosses_jump(pts[k], pts[(k + 1) % M])) ++out.crossings;
  return out;
}

GridFunction2D gradient_density(const PiecewiseFunction2D& U) {
  const Grid2D& g = U.grid();
  GridFunction2D f;
  f.grid = {g.origin + Vec2{g.h / 2, g.h / 2}, g.h, g.nx - 1, g.ny - 1};
  f.values.assign(f.grid.size(), 0.0);
  auto gp = U.gradient_power();
  auto w = U.domain().cell_weights(Region::kExtended);
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i)
      f.values[f.grid.index(i, j)] = gp[g.index(i, j)] * w[g.index(i, j)] / (g.h * g.h);
  return f;
}

T0Selection select_t0(const ConstructionTrace& trace, const PiecewiseFunction2D& U, double T,
                      int n_times, int samples_per_circle, double slack) {
  if (!(T > 0)) throw InvalidArgument("select_t0: T must be positive");
  if (n_times < 1) throw InvalidArgument("select_t0: n_times must be positive");
  T0Selection sel;
  sel.bound = dirichlet_energy(U, Region::kExtended) / T;
  if (trace.initial_balls().empty()) {
    sel.t0 = T / 2;
    sel.profile = {{T / 2, 0.0}};
    return sel;
  }
  std::vector<double> times(static_cast<size_t>(n_times));
  for (int k = 0; k < n_times; ++k) times[k] = (k + 0.5) * T / n_times;
  sel.profile = boundary_energy_profile(trace, gradient_density(U), times, samples_per_circle);
  size_t best = 0;
  for (size_t k = 1; k < sel.profile.size(); ++k)
    if (sel.profile[k].value < sel.profile[best].value) best = k;
  sel.t0 = sel.profile[best].time;
  sel.profile_at_t0 = sel.profile[best].value;
  sel.within_bound = sel.profile_at_t0 <= sel.bound * (1 + slack) + 1e-14;
  return sel;
}

Stitch fill_balls(const PiecewiseFunction2D& U, const std::vector<Ball>& balls, double slack,
                  int samples) {
  const Grid2D& g = U.grid();
  const double p = U.p();
  Stitch st;
  st.values = U.values();
  st.owner.assign(g.size(), -1);
  std::vector<std::pair<Vec2, double>> disks;
  for (const auto& b : balls) {
    st.patches.push_back(radial_fill(U, b, samples));
    disks.push_back({b.center, b.radius});
  }
  for (size_t k = 0; k < st.patches.size(); ++k) {
    const Ball& b = st.patches[k].ball;
    int i0 = std::max(0, static_cast<int>(std::floor((b.center.x - b.radius - g.origin.x) / g.h)));
    int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((b.center.x + b.radius - g.origin.x) / g.h)));
    int j0 = std::max(0, static_cast<int>(std::floor((b.center.y - b.radius - g.origin.y) / g.h)));
    int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((b.center.y + b.radius - g.origin.y) / g.h)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        Vec2 q = g.node(i, j);
        if (distance(q, b.center) < b.radius * (1 - 1e-12)) {
          st.values[g.index(i, j)] = st.patches[k].value(q);
          st.owner[g.index(i, j)] = static_cast<int>(k);
        }
      }
    st.crossings += st.patches[k].crossings;
    if (st.patches[k].patch_energy >
        radial_fill_constant(p) * st.patches[k].boundary_energy * (1 + slack) + 1e-14)
      st.warnings.push_back("radial fill of ball " + std::to_string(b.id) +
                            " exceeds the fill constant");
  }
  for (const auto& c : U.curves())
    for (size_t k = 0; k < c.segment_count(); ++k)
      for (const auto& s : segment_minus_disks(c.points[k], c.points[k + 1], disks))
        st.residual.push_back({{s.a, s.b}});
  // A trace that jumps is carried into the ball along radii.
  for (const auto& pt : st.patches) {
    if (pt.crossings == 0) continue;
    const int M = static_cast<int>(pt.trace.size());
    auto at = [&](double s) {
      double phi = 2 * kPi * s / M;
      return pt.ball.center + Vec2{std::cos(phi), std::sin(phi)} * pt.ball.radius;
    };
    for (int k = 0; k < M; ++k)
      if (U.crosses_jump(at(k), at(k + 1))) st.residual.push_back({{pt.ball.center, at(k + 0.5)}});
  }
  if (st.crossings > 0)
    st.warnings.push_back("boundary traces cross the jump set " + std::to_string(st.crossings) +
                          " times");
  return st;
}

ApproxResult2D approximate_2d(const PiecewiseFunction2D& u, const Approx2DOptions& opt) {
  const Domain2D& d = u.domain();
  d.validate();
  if (!(opt.T > 0)) throw InvalidArgument("T: horizon must be positive");
  ApproxResult2D r;
  r.u = u;
  r.T = opt.T;
  Extension ext = extend(u);
  r.U = ext.U;
  r.warnings = ext.warnings;
  r.extension_energy_ratio = ext.energy_ratio;
  r.extension_jump_ratio = ext.jump_ratio;
  r.jump_length = jump_mass(restrict_to_S(u.curves(), d));
  r.jump_length_extended = jump_mass(r.U.curves());
  r.energy_u = dirichlet_energy(u, Region::kS);
  r.energy_U = dirichlet_energy(r.U, Region::kExtended);
  const double p = u.p();
  r.energy_constant = opt.T * (r.extension_energy_ratio - 1) +
                      r.extension_energy_ratio * radial_fill_constant(p);

  double rho = opt.cover_radius > 0 ? opt.cover_radius : 2 * d.h;
  if (r.jump_length > 0) {
    r.cover = vitali_cover(r.U.curves(), rho);
    for (const auto& b : r.cover) r.sum_radii += b.radius;
    r.covering_constant = r.sum_radii / r.jump_length;
    r.eta = opt.eta > 0 ? opt.eta : d.margin / (2 * r.covering_constant);
    double allowed = std::exp(-opt.T) * r.eta;
    if (r.jump_length > allowed) {
      double t_max = std::log(r.eta / r.jump_length);
      std::ostringstream os;
      os << "jump set too large: H^1(J_u) = " << r.jump_length << " exceeds e^{-T} eta = "
         << allowed << " (eta = " << r.eta << ", covering constant " << r.covering_constant
         << "); largest admissible T = " << t_max;
      throw JumpSetTooLarge(os.str(), t_max, r.eta);
    }
  }
  r.trace = run_construction(r.cover, opt.T);
  r.selection = select_t0(r.trace, r.U, opt.T, opt.n_times, opt.samples_per_circle, opt.slack);
  r.t0 = r.selection.t0;
  if (!r.selection.within_bound)
    r.warnings.push_back("profile at the selected time exceeds the mean-value bound");

  if (!r.cover.empty()) {
    r.active_t0 = r.trace.active(r.t0);
    for (const auto& b : r.active_t0) {
      r.perimeter += 2 * std::numbers::pi * b.radius;
      double dist = d.distance_to_S(b.center);
      if (dist >= b.radius) continue;
      if (dist + b.radius > d.margin * (1 + 1e-12)) {
        std::ostringstream os;
        os << "ball " << b.id << " of radius " << b.radius << " leaves the extended domain at t0 = "
           << r.t0;
        throw JumpSetTooLarge(os.str(), std::log(r.eta / std::max(r.jump_length, 1e-300)), r.eta);
      }
      r.omega.push_back(b);
    }
  }
  Stitch st = fill_balls(r.U, r.omega, opt.slack);
  r.patches = std::move(st.patches);
  r.trace_crossings = st.crossings;
  r.warnings.insert(r.warnings.end(), st.warnings.begin(), st.warnings.end());
  std::vector<double> values = std::move(st.values);
  const std::vector<int>& owner = st.owner;
  std::vector<JumpCurve> residual = std::move(st.residual);
  const Grid2D& g = r.U.grid();
  r.w = PiecewiseFunction2D(d, p, std::move(values), std::move(residual), true);
  r.energy_w = dirichlet_energy(r.w, Region::kS);
  r.residual_jump_length = jump_mass(restrict_to_S(r.w.curves(), d));

  auto nw = d.node_weights(Region::kS);
  for (size_t k = 0; k < g.size(); ++k) {
    Vec2 q = g.node(k);
    if (owner[k] >= 0) {
      r.omega_area += nw[k];
      continue;
    }
    if (d.in_S(q) && r.w.values()[k] != u.values()[k]) ++r.changed_outside_omega;
  }
  const CutEdges& cuts = r.w.cuts();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      size_t k = g.index(i, j);
      if (!d.in_S(g.node(i, j))) continue;
      if (i + 1 < g.nx && cuts.horizontal[k] && d.in_S(g.node(i + 1, j))) ++r.residual_cut_edges;
      if (j + 1 < g.ny && cuts.vertical[k] && d.in_S(g.node(i, j + 1))) ++r.residual_cut_edges;
    }
  return r;
}

}  // namespace sbv
