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

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "mumford_shah.hpp"
#include "sobolev_approx_2d.hpp"
#include "svg.hpp"

namespace sbv {

namespace {

using Json = nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string tagged(const std::string& base, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s[%g]", base.c_str(), x);
  return buf;
}

// Runs fn; a module error is recorded against the stage and false returned.
template <class Fn>
bool stage(Report& rep, const std::string& name, Fn&& fn) {
  try {
    fn();
    return true;
  } catch (const StageError& e) {
    rep.fail(name + "/" + e.stage(), static_cast<int>(e.code()), e.what());
  } catch (const JumpSetTooLarge& e) {
    rep.fail(name, static_cast<int>(e.code()), e.what());
    rep.measure("max_admissible_T", e.max_admissible_T());
    rep.measure("budget", e.budget());
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    rep.fail(name, static_cast<int>(e.code()), e.what());
  } catch (const std::exception& e) {
    rep.fail(name, static_cast<int>(ErrorCode::kInternal), e.what());
  }
  return false;
}

Report make_report(const Scenario& s, const std::string& command) {
  return Report(command, s.name, hex64(s.hash), s.params.seed, s.canonical.value("params", Json::object()));
}

Json balls_json(const std::vector<Ball>& balls) {
  Json a = Json::array();
  for (const auto& b : balls) a.push_back({{"id", b.id}, {"cx", b.center.x}, {"cy", b.center.y}, {"r", b.radius}});
  return a;
}

// Sample times in [0, T], moved off every event.
std::vector<double> sample_times(const ConstructionTrace& tr, double T, int n) {
  auto ev = tr.event_times();
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    double t = n == 1 ? 0.0 : T * k / (n - 1);
    for (int guard = 0; guard < 8; ++guard) {
      bool hit = false;
      for (double e : ev)
        if (std::abs(t - e) <= 1e-12 * std::max(1.0, std::abs(e))) hit = true;
      if (!hit) break;
      t += 1e-9;
    }
    out.push_back(t);
  }
  return out;
}

bool inside_some(const Ball& b, const std::vector<Ball>& family, double tol) {
  for (const auto& o : family)
    if (ball_contains(o, b, tol)) return true;
  return false;
}

Domain2D bounding_domain(const std::vector<Ball>& balls) {
  Domain2D d;
  Vec2 lo{0, 0}, hi{1, 1};
  if (!balls.empty()) {
    lo = hi = balls.front().center;
    for (const auto& b : balls) {
      lo = {std::min(lo.x, b.center.x - b.radius), std::min(lo.y, b.center.y - b.radius)};
      hi = {std::max(hi.x, b.center.x + b.radius), std::max(hi.y, b.center.y + b.radius)};
    }
  }
  d.lo = lo;
  d.hi = hi;
  return d;
}

std::string family_svg(Vec2 lo, Vec2 hi, const std::vector<JumpCurve>& curves,
                       const std::vector<std::pair<std::vector<Ball>, std::string>>& layers,
                       const Domain2D* S) {
  Svg svg(lo, hi);
  if (S) {
    if (S->shape == DomainShape::kRectangle) svg.rect(S->lo, S->hi, "#888888");
    else svg.circle(S->center, S->radius, "#888888");
  }
  for (const auto& [balls, color] : layers)
    for (const auto& b : balls) svg.circle(b.center, b.radius, color, color, 0.15);
  for (const auto& c : curves) svg.polyline(c.points, "#000000", 1.5);
  return svg.str();
}

// ---------------------------------------------------------------- balls

RunResult run_balls(const Scenario& s, const RunOptions&) {
  auto fam = s.ball_family();
  if (fam.empty())
    throw ValidationError(std::vector<FieldError>{{"balls", "the balls command needs balls or random_balls"}});
  RunResult out{make_report(s, "balls"), {}};
  Report& rep = out.report;
  const double T = s.params.T;
  out.artifacts["balls.json"] = balls_json(fam).dump(2) + "\n";

  ConstructionTrace tr;
  if (!stage(rep, "run_construction", [&] { tr = run_construction(fam, T); })) return out;
  out.artifacts["events.csv"] = tr.events_csv();

  double sum0 = 0, rmax = 0;
  for (const auto& b : tr.initial_balls()) {
    sum0 += b.radius;
    rmax = std::max(rmax, b.radius);
  }
  auto times = sample_times(tr, T, std::max(2, s.params.n_times));
  double sum_dev = 0, overlap = 0;
  size_t nest = 0, drift = 0;
  for (size_t a = 0; a < times.size(); ++a) {
    double t = times[a];
    auto act = tr.active(t);
    double sum = 0, big = 0;
    for (const auto& b : act) {
      sum += b.radius;
      big = std::max(big, b.radius);
    }
    sum_dev = std::max(sum_dev, std::abs(sum - std::exp(t) * sum0) / (std::exp(t) * sum0));
    for (size_t i = 0; i < act.size(); ++i)
      for (size_t j = i + 1; j < act.size(); ++j) {
        double gap = distance(act[i].center, act[j].center) - act[i].radius - act[j].radius;
        overlap = std::max(overlap, -gap / big);
      }
    for (const auto& b : tr.initial_balls())
      if (!inside_some(b, act, 1e-9 * big)) ++nest;
    for (size_t c = a + 1; c < times.size(); ++c) {
      double t2 = times[c];
      auto act2 = tr.active(t2);
      for (const auto& b : act)
        if (!inside_some(b, act2, 1e-9 * std::exp(t2) * rmax)) ++nest;
      auto l1 = tr.active_labels(t), l2 = tr.active_labels(t2);
      for (size_t i = 0; i < act.size(); ++i)
        for (size_t j = 0; j < act2.size(); ++j)
          if (l1[i] == l2[j] &&
              distance(act2[j].center, act[i].center) >
                  act2[j].radius - std::exp(t2 - t) * act[i].radius + 1e-9)
            ++drift;
    }
  }
  rep.check("sum of radii equals e^t times the initial sum", "sum-radii", sum_dev, 1e-9);
  rep.check("active closures pairwise disjoint", "disjoint", overlap, 1e-9);
  rep.check("nesting of initial balls and of active unions", "nesting", static_cast<double>(nest), 0);
  rep.check("center drift within radius growth", "drift", static_cast<double>(drift), 0);
  size_t bad_events = 0;
  double last = 0;
  for (const auto& e : tr.events()) {
    if (e.time < last || e.consumed.size() < 2) ++bad_events;
    last = e.time;
  }
  rep.check("events nondecreasing and reducing the count", "events", static_cast<double>(bad_events), 0);

  // Prefix traces: collapse times nonincreasing in N, unions growing in N.
  if (fam.size() <= 200) {
    std::vector<ConstructionTrace> pre;
    if (stage(rep, "truncated_countable_construction",
              [&] { pre = truncated_countable_construction(fam, fam.size(), T); })) {
      size_t mono = 0;
      for (size_t N = 1; N < pre.size(); ++N) {
        for (const auto& [id, tc] : pre[N - 1].collapse_times())
          if (pre[N].collapse_time(id) > tc + 1e-12) ++mono;
        for (double t : times) {
          auto big = pre[N].active(t);
          for (const auto& b : pre[N - 1].active(t))
            if (!inside_some(b, big, 1e-9 * std::exp(t) * rmax)) ++mono;
        }
      }
      rep.check("prefix traces monotone in N", "monotone", static_cast<double>(mono), 0);
      rep.measure("truncation_level", static_cast<double>(fam.size()));
    }
  }

  // Time-integrated boundary profile against the mass of f.
  if (!s.function.terms.empty() || !s.function.regions.empty()) {
    Domain2D dd = s.domain;
    Grid2D g = dd.grid();
    GridFunction2D f{g, std::vector<double>(g.size())};
    bool negative = false;
    for (size_t k = 0; k < g.size(); ++k) {
      Vec2 q = g.node(k);
      f.values[k] = s.function.value({q.x, q.y, 0}, 2);
      if (f.values[k] < 0) negative = true;
    }
    if (negative) {
      rep.note("boundary-profile check skipped: the function takes negative values");
    } else {
      stage(rep, "integrated_boundary_profile", [&] {
        auto full = run_construction(fam, kInfinity);
        double lhs = integrated_boundary_profile(full, f, 4000, s.params.samples_per_circle);
        rep.check("time-integrated boundary profile below the mass of f", "fubini", lhs,
                  f.integral(), 0.01);
      });
    }
  }
  rep.measure("balls", static_cast<double>(tr.initial_balls().size()));
  rep.measure("merges", static_cast<double>(tr.events().size()));
  rep.measure("active_at_T", static_cast<double>(tr.active(T).size()));
  for (const auto& n : tr.notes()) rep.note(n);

  auto act = tr.active(T);
  Domain2D box = bounding_domain(act);
  out.artifacts["balls.svg"] =
      family_svg(box.lo, box.hi, {}, {{act, "#d62728"}, {tr.initial_balls(), "#1f77b4"}}, nullptr);
  return out;
}

// ---------------------------------------------------------------- approx2d

Approx2DOptions options_2d(const Params& p, double T) {
  Approx2DOptions o;
  o.T = T;
  o.cover_radius = p.cover_radius;
  o.n_times = p.n_times;
  o.eta = p.eta;
  o.samples_per_circle = std::max(p.samples_per_circle, 16);
  o.slack = p.slack;
  return o;
}

RunResult run_approx2d(const Scenario& s, const RunOptions&) {
  if (s.dim != 2)
    throw ValidationError(std::vector<FieldError>{{"interval", "approx2d needs a planar scenario (no interval)"}});
  RunResult out{make_report(s, "approx2d"), {}};
  Report& rep = out.report;
  PiecewiseFunction2D u;
  if (!stage(rep, "sample", [&] { u = s.function_2d(); })) return out;
  const double T = s.params.T;
  ApproxResult2D r;
  if (!stage(rep, "approximate_2d", [&] { r = approximate_2d(u, options_2d(s.params, T)); })) return out;

  const double sl = s.params.slack;
  rep.check("w equals u at nodes of S outside omega", "w-u-outside",
            static_cast<double>(r.changed_outside_omega), 0);
  rep.check("w has no cut edges in S", "jump-free", static_cast<double>(r.residual_cut_edges), 0);
  rep.check("energy of w", "energy-w", r.energy_w, (1 + r.energy_constant / T) * r.energy_u, sl);
  rep.check("perimeter of omega", "per-omega", r.perimeter,
            2 * std::numbers::pi * std::exp(T) * r.covering_constant * r.jump_length, sl);
  rep.check("boundary profile at t0", "mean-value", r.selection.profile_at_t0, r.selection.bound, sl);
  rep.check("jump set small", "smallness", r.jump_length, std::exp(-T) * r.eta);
  rep.measure("T", T);
  rep.measure("t0", r.t0);
  rep.measure("jump_length", r.jump_length);
  rep.measure("jump_length_extended", r.jump_length_extended);
  rep.measure("sum_radii", r.sum_radii);
  rep.measure("covering_constant", r.covering_constant);
  rep.measure("eta", r.eta);
  rep.measure("perimeter", r.perimeter);
  rep.measure("perimeter_ratio", r.perimeter / (std::exp(T) * r.jump_length));
  rep.measure("omega_area", r.omega_area);
  rep.measure("omega_balls", static_cast<double>(r.omega.size()));
  rep.measure("energy_u", r.energy_u);
  rep.measure("energy_U", r.energy_U);
  rep.measure("energy_w", r.energy_w);
  rep.measure("energy_ratio", r.energy_u > 0 ? r.energy_w / r.energy_u : 1.0);
  rep.measure("energy_constant", r.energy_constant);
  rep.measure("extension_energy_ratio", r.extension_energy_ratio);
  rep.measure("extension_jump_ratio", r.extension_jump_ratio);
  rep.measure("trace_crossings", static_cast<double>(r.trace_crossings));
  rep.measure("residual_jump_length", r.residual_jump_length);
  for (const auto& w : r.warnings) rep.note(w);

  Json omega = balls_json(r.omega);
  out.artifacts["omega.json"] = omega.dump(2) + "\n";
  {
    std::ostringstream csv;
    csv << "i,j,x,y,u,w\n";
    const Grid2D& g = u.grid();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        size_t k = g.index(i, j);
        Vec2 q = g.node(i, j);
        csv << i << "," << j << "," << g17(q.x) << "," << g17(q.y) << "," << g17(r.U.values()[k])
            << "," << g17(r.w.values()[k]) << "\n";
      }
    out.artifacts["w.csv"] = csv.str();
  }
  const Grid2D& g = u.grid();
  out.artifacts["overlay.svg"] = family_svg(g.origin, {g.xmax(), g.ymax()}, u.curves(),
                                            {{r.cover, "#1f77b4"}, {r.omega, "#d62728"}}, &u.domain());

  if (!s.params.T_sweep.empty()) {
    std::ostringstream csv;
    csv << "T,t0,energy_ratio,excess,perimeter_ratio\n";
    std::vector<double> excess;
    for (double Tk : s.params.T_sweep) {
      ApproxResult2D rk;
      if (!stage(rep, tagged("t-sweep", Tk), [&] { rk = approximate_2d(u, options_2d(s.params, Tk)); }))
        return out;
      double ex = rk.energy_w / rk.energy_u - 1;
      excess.push_back(ex);
      csv << g17(Tk) << "," << g17(rk.t0) << "," << g17(rk.energy_w / rk.energy_u) << "," << g17(ex)
          << "," << g17(rk.perimeter / (std::exp(Tk) * rk.jump_length)) << "\n";
      rep.check(tagged("w equals u outside omega, T", Tk), "w-u-outside",
                static_cast<double>(rk.changed_outside_omega), 0);
      rep.check(tagged("w jump-free, T", Tk), "jump-free", static_cast<double>(rk.residual_cut_edges), 0);
    }
    for (size_t k = 1; k < excess.size(); ++k)
      rep.check(tagged("energy excess nonincreasing up to T", s.params.T_sweep[k]), "t-sweep",
                excess[k] - excess[k - 1], 0.05 * std::abs(excess[k - 1]) + 1e-12);
    out.artifacts["t_sweep.csv"] = csv.str();
  }
  return out;
}

// ---------------------------------------------------------------- approx3d

Approx3DOptions options_3d(const Scenario& s, int threads, double cover_radius) {
  Approx3DOptions o;
  o.T = s.params.T;
  o.cover_radius = cover_radius;
  o.eta = s.params.eta;
  o.n_times = s.params.n_times;
  o.samples_per_circle = s.params.samples_per_circle;
  o.enforce_guard = s.params.enforce_guard;
  o.slack = s.params.slack;
  o.threads = threads;
  return o;
}

double cover_for(const Scenario& s, double h) {
  if (s.params.cover_radius > 0) return s.params.cover_radius;
  if (s.sweep && h > 0) return s.sweep->cover_factor * h;
  return 0.0;
}

size_t mask_excess(const ExceptionalSet3D& inner, const ExceptionalSet3D& outer) {
  size_t n = 0;
  for (size_t k = 0; k < inner.mask.size() && k < outer.mask.size(); ++k)
    if (inner.mask[k] && !outer.mask[k]) ++n;
  return n;
}

void checks_3d(Report& rep, const ApproxResult3D& r, double p, double slack, const std::string& suffix) {
  rep.check("w equals u at nodes of S outside omega" + suffix, "w-u-outside",
            static_cast<double>(r.changed_outside_omega), 0);
  rep.check("w has no cut edges in S on admissible slices" + suffix, "jump-free",
            static_cast<double>(r.residual_cut_edges), 0);
  rep.check("inadmissible measure below the Markov bound" + suffix, "inadmissible",
            r.omega.inadmissible_measure, r.markov_bound);
  rep.check("aggregated boundary profile at t0" + suffix, "mean-value", r.profile_at_t0,
            r.profile_bound, slack);
  rep.check("spatial energy of w" + suffix, "energy-w", r.energy_w_spatial,
            (1 + 4 * radial_fill_constant(p) / r.T) * r.energy_U_spatial, slack);
  rep.check("omega at t0 inside the grown set" + suffix, "slice-monotone",
            static_cast<double>(mask_excess(r.omega, r.grown)), 0);
}

Json measures_3d(const ApproxResult3D& r) {
  double scale = std::exp(r.T) * r.rescaled.transverse;
  Json m;
  auto n = [](double v) { return Report::number(v); };
  m["T"] = n(r.T);
  m["t0"] = n(r.t0);
  m["eta"] = n(r.eta);
  m["delta"] = n(r.rescaled.delta);
  m["transverse_mass"] = n(r.rescaled.transverse);
  m["jump_area"] = n(r.rescaled.area);
  m["cylinders"] = r.family.cylinders.size();
  m["cover_radius"] = n(r.family.rho);
  m["sum_radii_integral"] = n(r.family.integral);
  m["cylinder_constant"] = n(r.cylinder_constant);
  m["markov_bound"] = n(r.markov_bound);
  m["inadmissible_measure"] = n(r.omega.inadmissible_measure);
  m["volume"] = n(r.omega.volume);
  m["volume_in_S"] = n(r.omega.volume_in_S);
  m["perimeter"] = {n(r.omega.perimeter[0]), n(r.omega.perimeter[1]), n(r.omega.perimeter[2])};
  m["volume_ratio"] = n(scale > 0 ? r.omega.volume / scale : 0.0);
  m["perimeter_ratio"] = {n(scale > 0 ? r.omega.perimeter[1] / scale : 0.0),
                          n(scale > 0 ? r.omega.perimeter[2] / scale : 0.0)};
  m["grown_volume"] = n(r.grown.volume);
  m["energy_u_spatial"] = n(r.energy_u_spatial);
  m["energy_U_spatial"] = n(r.energy_U_spatial);
  m["energy_w_spatial"] = n(r.energy_w_spatial);
  m["zeroed_measure"] = n(r.zeroed_measure);
  m["trace_crossings"] = r.trace_crossings;
  return m;
}

RunResult run_approx3d(const Scenario& s, const RunOptions& opt) {
  if (s.dim != 3)
    throw ValidationError(std::vector<FieldError>{{"interval", "approx3d needs an interval"}});
  RunResult out{make_report(s, "approx3d"), {}};
  Report& rep = out.report;
  Function3D u;
  if (!stage(rep, "sample", [&] { u = s.function_3d(); })) return out;
  ApproxResult3D r;
  const double cover = cover_for(s, s.counterexample_h.value_or(0.0));
  if (!stage(rep, "approximate_3d", [&] { r = approximate_3d(u, options_3d(s, opt.threads, cover)); }))
    return out;
  checks_3d(rep, r, s.params.p, s.params.slack, "");
  rep.measure("summary", measures_3d(r));
  if (r.rescaled.degenerate()) rep.note("no transverse jump: omega is empty and w = u");
  for (const auto& w : r.warnings) rep.note(w);

  const Grid2D& g = u.slice(0).grid();
  Json mask = {{"slices", u.slice_count()}, {"nx", g.nx}, {"ny", g.ny}, {"origin", {g.origin.x, g.origin.y}},
               {"h", g.h}, {"interval", {u.a(), u.b()}}, {"order", "slice-major, then row-major nodes"},
               {"rle", run_length(r.omega.mask)}};
  out.artifacts["omega_mask.json"] = mask.dump() + "\n";
  Json slices = Json::array();
  for (int k = 0; k < u.slice_count(); ++k)
    slices.push_back({{"slice", k}, {"x1", u.slice_center(k)},
                      {"admissible", static_cast<bool>(r.omega.admissible[static_cast<size_t>(k)])},
                      {"disks", balls_json(r.omega.disks[static_cast<size_t>(k)])}});
  out.artifacts["slices.json"] = slices.dump(1) + "\n";
  // Snapshots of up to six slices carrying disks, spread over I.
  std::vector<int> with;
  for (int k = 0; k < u.slice_count(); ++k)
    if (!r.omega.disks[static_cast<size_t>(k)].empty()) with.push_back(k);
  const size_t shots = std::min<size_t>(6, with.size());
  for (size_t s2 = 0; s2 < shots; ++s2) {
    int k = with[s2 * with.size() / shots];
    char name[64];
    std::snprintf(name, sizeof name, "slice_%04d.svg", k);
    out.artifacts[name] = family_svg(g.origin, {g.xmax(), g.ymax()}, u.slice(k).curves(),
                                     {{r.omega.disks[static_cast<size_t>(k)], "#d62728"}}, &u.domain());
  }
  return out;
}

// ---------------------------------------------------------------- ms-gamma

RunResult run_ms_gamma(const Scenario& s, const RunOptions& opt) {
  if (s.dim != 3)
    throw ValidationError(std::vector<FieldError>{{"interval", "ms-gamma needs an interval"}});
  if (!(s.params.p > 1))
    throw ValidationError(std::vector<FieldError>{{"params.p", "ms-gamma needs p > 1"}});
  RunResult out{make_report(s, "ms-gamma"), {}};
  Report& rep = out.report;
  std::vector<double> eps = s.params.eps;
  std::sort(eps.begin(), eps.end());
  std::vector<std::pair<double, Function3D>> fam;
  if (!stage(rep, "sample", [&] {
        for (double e : eps) fam.push_back({e, s.function_3d(e)});
      }))
    return out;

  // F_eps(u) nonincreasing in eps for every member.
  for (const auto& [e, u] : fam) {
    EnergyParts parts = energy_parts(u);
    double worst = 0;
    for (size_t k = 1; k < eps.size(); ++k)
      worst = std::max(worst, parts.total(eps[k]) - parts.total(eps[k - 1]));
    rep.check(tagged("F_eps nonincreasing in eps for u", e), "monotone-eps", worst, 0);
  }

  GammaOptions go;
  go.delta = s.params.delta;
  go.tolerance = s.params.tolerance;
  go.approx = options_3d(s, opt.threads, s.params.cover_radius);
  GammaReport gr;
  if (!stage(rep, "compactness_pipeline", [&] { gr = compactness_pipeline(fam, go); })) return out;

  const double sl = s.params.slack;
  Json entries = Json::array();
  std::vector<double> xs, ys;
  for (const auto& e : gr.entries) {
    rep.check(tagged("jump count of w", e.eps), "jump-count", e.jumps_w, e.jump_bound);
    rep.check(tagged("F0(w) against (1 + delta) F_eps", e.eps), "est-energy", e.F0_w,
              (1 + go.delta) * e.F_eps, sl);
    Json j;
    j["eps"] = e.eps;
    j["F_eps"] = Report::number(e.F_eps);
    j["parts"] = {{"spatial", e.parts.spatial}, {"temporal", e.parts.temporal},
                  {"transverse_jump", e.parts.transverse_jump}, {"temporal_jump", e.parts.temporal_jump}};
    j["F0_w"] = Report::number(e.F0_w);
    j["branch"] = e.branch;
    j["columns"] = {e.x, e.y};
    j["jumps"] = {{"b", e.jumps_b}, {"d", e.jumps_d}, {"w", e.jumps_w}};
    j["jump_bound"] = e.jump_bound;
    j["lambda_measures_small"] = std::vector<double>(e.lambda_measures_small, e.lambda_measures_small + 4);
    j["lambda_measures_large"] = std::vector<double>(e.lambda_measures_large, e.lambda_measures_large + 4);
    j["omega_volume"] = e.omega_volume;
    j["poincare_error"] = e.poincare_error;
    j["removal_measure"] = e.removal_measure;
    j["diagnostic"] = e.diagnostic;
    entries.push_back(j);
    xs.push_back(e.eps);
    ys.push_back(e.diagnostic);

    std::ostringstream csv;
    csv << "x1,w,c\n";
    std::vector<double> pts = e.w.nodes();
    for (const auto& jp : e.w.jumps()) pts.push_back(jp.x);
    std::sort(pts.begin(), pts.end());
    for (double x : pts) csv << g17(x) << "," << g17(e.w(x)) << "," << g17(e.c(x)) << "\n";
    out.artifacts[tagged("column_trace_eps", e.eps) + ".csv"] = csv.str();
  }
  size_t ups = 0;
  for (size_t k = 1; k < gr.entries.size(); ++k)
    if (gr.entries[k].diagnostic < gr.entries[k - 1].diagnostic) ++ups;  // entries ascend in eps
  rep.check("diagnostic nonincreasing as eps decreases", "diagnostic-monotone", static_cast<double>(ups), 0);
  if (!gr.entries.empty()) {
    const auto& fine = gr.entries.front();
    rep.check("liminf: F0 of the limit at most F_eps at the finest eps (5% slack)", "liminf",
              0.95 * fine.F0_w, fine.F_eps);
  }
  rep.measure("energy_slope", gr.energy_slope);
  rep.measure("diagnostic_slope", gr.diagnostic_slope);
  rep.measure("liminf_ratio", gr.liminf_ratio);
  Json gj = {{"entries", entries}, {"energy_slope", Report::number(gr.energy_slope)},
             {"diagnostic_slope", Report::number(gr.diagnostic_slope)},
             {"diagnostic_monotone", gr.diagnostic_monotone}, {"liminf_ratio", Report::number(gr.liminf_ratio)}};
  out.artifacts["gamma.json"] = gj.dump(2) + "\n";
  out.artifacts["decay.svg"] = loglog_plot(xs, ys, gr.diagnostic_slope, loglog_fit(xs, ys).second,
                                           "diagnostic against eps");
  return out;
}

// ---------------------------------------------------------------- counterexample-sweep

RunResult run_sweep(const Scenario& s, const RunOptions& opt) {
  if (!s.sweep)
    throw ValidationError(std::vector<FieldError>{{"counterexample", "counterexample-sweep needs a counterexample block"}});
  RunResult out{make_report(s, "counterexample-sweep"), {}};
  Report& rep = out.report;
  const SweepSpec& sw = *s.sweep;
  const bool a = sw.kind == CounterexampleKind::kA;
  std::ostringstream csv;
  csv << "h,transverse_mass,volume,volume_in_S,perimeter_x1,perimeter_x2,perimeter_x3,inadmissible,t0\n";
  std::vector<double> hs, metric, vol, p2;
  for (double h : sw.h) {
    ApproxResult3D r;
    bool ok = stage(rep, tagged("approximate_3d h", h), [&] {
      Function3D u = counterexample_family(sw.kind, h, sw.options);
      r = approximate_3d(u, options_3d(s, opt.threads, cover_for(s, h)));
    });
    if (!ok) {
      out.artifacts["sweep.csv"] = csv.str();
      return out;
    }
    checks_3d(rep, r, s.params.p, s.params.slack, tagged(", h", h));
    hs.push_back(h);
    vol.push_back(r.omega.volume);
    p2.push_back(r.omega.perimeter[1]);
    metric.push_back(a ? r.omega.volume : r.omega.perimeter[1]);
    csv << g17(h) << "," << g17(r.rescaled.transverse) << "," << g17(r.omega.volume) << ","
        << g17(r.omega.volume_in_S) << "," << g17(r.omega.perimeter[0]) << ","
        << g17(r.omega.perimeter[1]) << "," << g17(r.omega.perimeter[2]) << ","
        << g17(r.omega.inadmissible_measure) << "," << g17(r.t0) << "\n";
  }
  auto [alpha, c] = loglog_fit(hs, metric);
  rep.check(a ? "volume exponent |alpha - 1|" : "x2-perimeter exponent |alpha - 1|", "optimality",
            std::abs(alpha - 1), 0.15);
  rep.measure("alpha", alpha);
  rep.measure("alpha_volume", loglog_fit(hs, vol).first);
  rep.measure("alpha_perimeter_x2", loglog_fit(hs, p2).first);
  out.artifacts["sweep.csv"] = csv.str();
  out.artifacts["sweep.svg"] = loglog_plot(hs, metric, alpha, c, a ? "volume against h" : "x2-perimeter against h");
  return out;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"balls", "approx2d", "approx3d", "ms-gamma", "counterexample-sweep"};
}

RunResult run_experiment(const Scenario& s, const std::string& command, const RunOptions& opt) {
  if (command == "balls") return run_balls(s, opt);
  if (command == "approx2d") return run_approx2d(s, opt);
  if (command == "approx3d") return run_approx3d(s, opt);
  if (command == "ms-gamma") return run_ms_gamma(s, opt);
  if (command == "counterexample-sweep") return run_sweep(s, opt);
  throw ValidationError(std::vector<FieldError>{{"command", "unknown command " + command}});
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kBoundViolation:
    case ErrorCode::kJumpSetTooLarge:
    case ErrorCode::kUnboundedEnergy:
      return 1;
    case ErrorCode::kValidation:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kPrecondition:
    case ErrorCode::kIo:
      return 2;
    default:
      return 3;
  }
}

int exit_code(const Report& r) {
  if (r.failed()) return exit_code(static_cast<ErrorCode>(r.error_code()));
  return r.all_pass() ? 0 : 1;
}

nlohmann::json run_length(const std::vector<uint8_t>& mask) {
  nlohmann::json out = nlohmann::json::array();
  size_t k = 0;
  while (k < mask.size()) {
    size_t e = k;
    while (e < mask.size() && (mask[e] != 0) == (mask[k] != 0)) ++e;
    out.push_back(mask[k] ? 1 : 0);
    out.push_back(e - k);
    k = e;
  }
  return out;
}

}  // namespace sbv
