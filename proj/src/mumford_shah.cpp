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

#include "mumford_shah.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace sbv {

namespace {

double pw(double x, double p) { return p == 2 ? x * x : std::pow(std::abs(x), p); }

// \int_0^len |linear from d0 to d1|^p.
double linear_power_integral(double d0, double d1, double len, double p) {
  if (len <= 0) return 0.0;
  if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
    double t = d0 / (d0 - d1) * len;
    return linear_power_integral(d0, 0, t, p) + linear_power_integral(0, d1, len - t, p);
  }
  double a0 = std::abs(d0), a1 = std::abs(d1);
  if (std::abs(a1 - a0) <= 1e-14 * std::max(a0, a1)) return len * pw(0.5 * (a0 + a1), p);
  return len * (std::pow(a1, p + 1) - std::pow(a0, p + 1)) / ((p + 1) * (a1 - a0));
}

// The piece whose line holds on (s0, s1), by its midpoint.
const Function1D::Piece& piece_at(const Function1D& f, double x) {
  const auto& ps = f.pieces();
  auto it = std::upper_bound(ps.begin(), ps.end(), x,
                             [](double v, const Function1D::Piece& p) { return v < p.x0; });
  if (it != ps.begin()) --it;
  return *it;
}

double line(const Function1D::Piece& p, double x) {
  return p.v0 + (p.v1 - p.v0) * (x - p.x0) / (p.x1 - p.x0);
}

// \int_{s0}^{s1} |f'|^p.
double derivative_energy_on(const Function1D& f, double s0, double s1) {
  double e = 0;
  for (const auto& p : f.pieces()) {
    double lo = std::max(s0, p.x0), hi = std::min(s1, p.x1);
    if (hi > lo) e += (hi - lo) * pw((p.v1 - p.v0) / (p.x1 - p.x0), f.p());
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------- intervals

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) {
  std::sort(intervals.begin(), intervals.end());
  for (const auto& x : intervals) {
    if (!(x.second > x.first)) continue;
    if (!iv_.empty() && x.first <= iv_.back().second)
      iv_.back().second = std::max(iv_.back().second, x.second);
    else
      iv_.push_back(x);
  }
}

double IntervalSet::measure() const {
  double m = 0;
  for (const auto& x : iv_) m += x.second - x.first;
  return m;
}

bool IntervalSet::contains(double x) const {
  for (const auto& v : iv_)
    if (x > v.first && x < v.second) return true;
  return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  auto all = iv_;
  all.insert(all.end(), o.iv_.begin(), o.iv_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(double a, double b) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& v : iv_) out.push_back({std::max(a, v.first), std::min(b, v.second)});
  return IntervalSet(std::move(out));
}

// ---------------------------------------------------------------- Function1D

Function1D::Function1D(std::vector<double> nodes, std::vector<double> values,
                       std::vector<JumpPoint> jumps, double p)
    : nodes_(std::move(nodes)), values_(std::move(values)), jumps_(std::move(jumps)), p_(p) {
  if (nodes_.size() < 2) throw InvalidArgument("function1d: at least two nodes are required");
  if (values_.size() != nodes_.size())
    throw InvalidArgument("function1d: one value per node is required");
  if (!(p_ >= 1)) throw InvalidArgument("p: must be at least 1");
  for (size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw InvalidArgument("function1d: nodes must be strictly increasing");
  const double tol = 1e-12 * (b() - a());
  for (size_t i = 0; i < jumps_.size(); ++i) {
    double x = jumps_[i].x;
    if (!(x > a() && x < b())) throw InvalidArgument("jump_points: must lie strictly inside I");
    if (i > 0 && !(x > jumps_[i - 1].x))
      throw InvalidArgument("jump_points: must be strictly increasing");
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    if ((it != nodes_.end() && *it - x < tol) || (it != nodes_.begin() && x - *(it - 1) < tol))
      throw InvalidArgument("jump_points: a jump may not sit on a node");
  }
  size_t j = 0;
  for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
    double x = nodes_[i], v = values_[i];
    for (; j < jumps_.size() && jumps_[j].x < nodes_[i + 1]; ++j) {
      pieces_.push_back({x, v, jumps_[j].x, jumps_[j].left});
      x = jumps_[j].x;
      v = jumps_[j].right;
    }
    pieces_.push_back({x, v, nodes_[i + 1], values_[i + 1]});
  }
}

Function1D Function1D::piecewise(double a, double b, int n, double p, std::vector<double> jumps,
                                 const std::function<double(double, int)>& f) {
  if (n < 1) throw InvalidArgument("function1d: at least one edge is required");
  std::sort(jumps.begin(), jumps.end());
  // Grid nodes that fall on a jump are left out; the jump splits the edge anyway.
  std::vector<double> nodes, values;
  const double tol = 1e-12 * (b - a);
  for (int i = 0; i <= n; ++i) {
    double x = i == n ? b : a + (b - a) * i / n;
    auto it = std::lower_bound(jumps.begin(), jumps.end(), x - tol);
    if (i > 0 && i < n && it != jumps.end() && *it <= x + tol) continue;
    int piece = static_cast<int>(std::upper_bound(jumps.begin(), jumps.end(), x) - jumps.begin());
    nodes.push_back(x);
    values.push_back(f(x, piece));
  }
  std::vector<JumpPoint> jp;
  for (size_t k = 0; k < jumps.size(); ++k)
    jp.push_back({jumps[k], f(jumps[k], static_cast<int>(k)), f(jumps[k], static_cast<int>(k) + 1)});
  return Function1D(std::move(nodes), std::move(values), std::move(jp), p);
}

double Function1D::operator()(double x) const {
  x = std::clamp(x, a(), b());
  const Piece& p = piece_at(*this, x);
  return line(p, std::min(x, p.x1));
}

double Function1D::derivative_energy() const { return derivative_energy_on(*this, a(), b()); }

double Function1D::derivative_norm() const { return std::pow(derivative_energy(), 1 / p_); }

double lp_distance(const Function1D& u, const Function1D& v, const IntervalSet& excluded) {
  if (std::abs(u.a() - v.a()) > 1e-12 || std::abs(u.b() - v.b()) > 1e-12)
    throw InvalidArgument("lp_distance: functions live on different intervals");
  std::vector<double> cuts;
  for (const auto* f : {&u, &v})
    for (const auto& p : f->pieces()) {
      cuts.push_back(p.x0);
      cuts.push_back(p.x1);
    }
  for (const auto& x : excluded.intervals()) {
    cuts.push_back(x.first);
    cuts.push_back(x.second);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double p = u.p();
  double s = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double s0 = std::max(cuts[i], u.a()), s1 = std::min(cuts[i + 1], u.b());
    if (!(s1 > s0)) continue;
    double m = 0.5 * (s0 + s1);
    if (excluded.contains(m)) continue;
    const auto& pu = piece_at(u, m);
    const auto& pv = piece_at(v, m);
    s += linear_power_integral(line(pu, s0) - line(pv, s0), line(pu, s1) - line(pv, s1), s1 - s0, p);
  }
  return std::pow(s, 1 / p);
}

double energy_F0(const Function1D& u, double cross_section_area) {
  return cross_section_area * (u.derivative_energy() + u.jump_count());
}

// ---------------------------------------------------------------- 3D energies

EnergyParts energy_parts(const Function3D& u) {
  EnergyParts e;
  e.spatial = dirichlet_energy(u, Derivative::kSpatial);
  e.temporal = dirichlet_energy(u, Derivative::kTemporal);
  e.transverse_jump = jump_mass(u.surface(), JumpWeight::kTransverse);
  e.temporal_jump = jump_mass(u.surface(), JumpWeight::kTemporal);
  return e;
}

double energy_F_eps(const Function3D& u, double eps) {
  if (!(eps > 0)) throw ValidationError(std::vector<FieldError>{{"eps", "must be positive"}});
  return energy_parts(u).total(eps);
}

Function3D lift(const Function1D& f, const Domain2D& domain, int slices, int segments) {
  std::vector<Triangle3> surface;
  for (const auto& j : f.jumps()) {
    auto plane = plane_surface(domain, j.x, segments);
    surface.insert(surface.end(), plane.begin(), plane.end());
  }
  return Function3D::sample(
      domain, f.a(), f.b(), slices, f.p(), [&](double x1, Vec2) { return f(x1); },
      std::move(surface));
}

// ---------------------------------------------------------------- jump removal

namespace {

void require_p(double p, const char* stage) {
  if (!(p > 1))
    throw InvalidArgument(std::string(stage) +
                          ": p must exceed 1; for p = 1 the traces between jumps need not be "
                          "Hoelder continuous and jumps cannot be removed");
}

double nan_safe_ratio(double num, double den) {
  if (den > 0) return num / den;
  return num > 0 ? kInfinity : 0.0;
}

}  // namespace

JumpRemoval jump_removal(const Function1D& u, const Function1D& v, const IntervalSet& A) {
  require_p(u.p(), "jump_removal");
  if (u.p() != v.p()) throw InvalidArgument("jump_removal: u and v must share p");
  if (std::abs(u.a() - v.a()) > 1e-12 || std::abs(u.b() - v.b()) > 1e-12)
    throw InvalidArgument("jump_removal: u and v must live on one interval");
  const int N = u.jump_count(), M = v.jump_count();
  if (N > M) {
    std::ostringstream os;
    os << "jump_removal: #J_u = " << N << " exceeds #J_v = " << M;
    throw PreconditionViolation(os.str());
  }
  const double a = v.a(), b = v.b(), p = v.p();
  JumpRemoval out;
  std::vector<double> tau{a};
  for (const auto& j : u.jumps()) tau.push_back(j.x);
  tau.push_back(b);

  // Offsets w - v, constant on every v-interval of every u-piece.
  struct Cell {
    double x0, x1, offset;
    bool short_;
  };
  std::vector<Cell> cells;
  std::vector<std::pair<double, double>> tilde;
  for (size_t piece = 0; piece + 1 < tau.size(); ++piece) {
    const double s0 = tau[piece], s1 = tau[piece + 1];
    IntervalSet outside({{a, s0}, {s1, b}});
    IntervalSet excl = A.unite(outside);
    double num = lp_distance(u, v, excl);
    double den = std::pow(derivative_energy_on(u, s0, s1), 1 / p) +
                 std::pow(derivative_energy_on(v, s0, s1), 1 / p);
    double lA = 2 * A.intersect(s0, s1).measure();
    double l;
    if (den > 0) {
      l = std::max(num / den, lA);
    } else if (num > 0) {
      l = kInfinity;
      out.degenerate = true;
    } else {
      l = lA;
    }
    if (std::isfinite(l)) out.l = std::max(out.l, l);
    std::vector<double> pts{s0};
    std::vector<double> sizes;
    for (const auto& j : v.jumps())
      if (j.x > s0 && j.x < s1) {
        pts.push_back(j.x);
        sizes.push_back(j.right - j.left);
      }
    pts.push_back(s1);
    const size_t first = cells.size();
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      cells.push_back({pts[i], pts[i + 1], 0.0, pts[i + 1] - pts[i] < l});
    // Anchor on the longest kept interval, or the longest one if all are short.
    size_t anchor = first;
    bool found = false;
    for (size_t c = first; c < cells.size(); ++c) {
      double len = cells[c].x1 - cells[c].x0;
      if (!cells[c].short_ && (!found || len > cells[anchor].x1 - cells[anchor].x0)) {
        anchor = c;
        found = true;
      }
    }
    if (!found)
      for (size_t c = first; c < cells.size(); ++c)
        if (cells[c].x1 - cells[c].x0 > cells[anchor].x1 - cells[anchor].x0) anchor = c;
    for (size_t c = anchor + 1; c < cells.size(); ++c)
      cells[c].offset = cells[c - 1].offset - sizes[c - 1 - first];
    for (size_t c = anchor; c-- > first;) cells[c].offset = cells[c + 1].offset + sizes[c - first];
    for (size_t c = first; c < cells.size(); ++c)
      if (cells[c].short_) tilde.push_back({cells[c].x0, cells[c].x1});
  }
  out.A_tilde = IntervalSet(std::move(tilde));
  for (const auto& c : cells)
    if (!c.short_ && c.x1 > c.x0) out.sup_w_minus_v = std::max(out.sup_w_minus_v, std::abs(c.offset));

  auto cell_of = [&](double x) {
    size_t k = 0;
    while (k + 1 < cells.size() && x >= cells[k].x1) ++k;
    return k;
  };
  // w = v + offset; the removed jumps of v become kinks, hence nodes.
  std::vector<std::pair<double, double>> nv;
  for (size_t i = 0; i < v.nodes().size(); ++i) {
    double x = v.nodes()[i];
    nv.push_back({x, v.values()[i] + cells[cell_of(x)].offset});
  }
  std::vector<JumpPoint> jw;
  for (const auto& j : v.jumps()) {
    bool kept = std::any_of(u.jumps().begin(), u.jumps().end(),
                            [&](const JumpPoint& t) { return t.x == j.x; });
    size_t c = cell_of(j.x);
    if (kept) jw.push_back({j.x, j.left + cells[c - 1].offset, j.right + cells[c].offset});
    else nv.push_back({j.x, j.right + cells[c].offset});
  }
  for (const auto& t : u.jumps()) {
    if (std::any_of(v.jumps().begin(), v.jumps().end(), [&](const JumpPoint& j) { return j.x == t.x; }))
      continue;
    size_t c = cell_of(t.x);
    double val = v(t.x);
    jw.push_back({t.x, val + cells[c - 1].offset, val + cells[c].offset});
  }
  std::sort(nv.begin(), nv.end());
  std::sort(jw.begin(), jw.end(), [](const JumpPoint& x, const JumpPoint& y) { return x.x < y.x; });
  std::vector<double> nodes, values;
  for (const auto& [x, val] : nv) {
    nodes.push_back(x);
    values.push_back(val);
  }
  for (const auto& j : jw)
    if (std::binary_search(nodes.begin(), nodes.end(), j.x))
      throw PreconditionViolation("jump_removal: a jump of u sits on a node of v");
  out.w = Function1D(std::move(nodes), std::move(values), std::move(jw), p);

  out.energy_v = v.derivative_energy();
  out.energy_w = out.w.derivative_energy();
  const double dist = lp_distance(u, v, A);
  const double den = u.derivative_norm() + v.derivative_norm();
  const double pp = p / (p - 1);
  out.rhs_w_v = std::pow(dist, 1 / pp) * std::pow(den, 1 / p) + std::pow(A.measure(), 1 / pp) * den;
  out.rhs_A = A.measure() + nan_safe_ratio(dist, den);
  out.constant_w_v = nan_safe_ratio(out.sup_w_minus_v, out.rhs_w_v);
  out.constant_A = nan_safe_ratio(out.A_tilde.measure(), out.rhs_A);
  return out;
}

// ---------------------------------------------------------------- columns

Function1D column_trace(const Function3D& u, size_t node) {
  const int n = u.slice_count();
  const double delta = u.thickness();
  std::vector<double> vals(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) vals[k] = u.slice(k).values()[node];
  if (n == 1) return Function1D({u.a(), u.b()}, {vals[0], vals[0]}, {}, u.p());
  const auto& cr = u.temporal_crossings()[node];
  auto d = column_slopes(vals, delta, cr);
  std::vector<uint8_t> cut(d.size(), 0);
  for (const auto& c : cr) cut[static_cast<size_t>(c.first)] = 1;
  std::vector<double> nodes{u.a()}, values{vals[0] - d.front() * delta / 2};
  for (int k = 0; k < n; ++k) {
    nodes.push_back(u.slice_center(k));
    values.push_back(vals[k]);
  }
  nodes.push_back(u.b());
  values.push_back(vals.back() + d.back() * delta / 2);
  std::vector<JumpPoint> jumps;
  for (size_t i = 0; i < cr.size();) {
    const int k = cr[i].first;
    size_t e = i;
    while (e < cr.size() && cr[e].first == k) ++e;
    int l = k - 1, r = k + 1;
    while (l >= 0 && cut[l]) --l;
    while (r < n - 1 && cut[r]) ++r;
    double dl = l >= 0 ? d[l] : r < n - 1 ? d[r] : 0.0;
    double dr = r < n - 1 ? d[r] : dl;
    double xk = u.slice_center(k);
    double L = vals[k] + dl * (cr[i].second - xk);
    double R = vals[k + 1] - dr * (xk + delta - cr[e - 1].second);
    if (e - i == 1) {
      jumps.push_back({cr[i].second, L, R});
    } else {
      double mid = 0.5 * (L + R);
      jumps.push_back({cr[i].second, L, mid});
      for (size_t m = i + 1; m + 1 < e; ++m) jumps.push_back({cr[m].second, mid, mid});
      jumps.push_back({cr[e - 1].second, mid, R});
    }
    i = e;
  }
  return Function1D(std::move(nodes), std::move(values), std::move(jumps), u.p());
}

IntervalSet column_omega(const Function3D& u, const ExceptionalSet3D& omega, size_t node) {
  std::vector<std::pair<double, double>> iv;
  const double h = u.thickness() / 2;
  for (int k = 0; k < u.slice_count(); ++k)
    if (omega.in(k, node)) iv.push_back({u.slice_center(k) - h, u.slice_center(k) + h});
  return IntervalSet(std::move(iv));
}

Function1D piecewise_average(const Function1D& w) {
  std::vector<double> cuts{w.a()};
  for (const auto& j : w.jumps()) cuts.push_back(j.x);
  cuts.push_back(w.b());
  std::vector<double> avg(cuts.size() - 1, 0.0);
  for (const auto& p : w.pieces()) {
    size_t i = static_cast<size_t>(std::upper_bound(cuts.begin(), cuts.end(), 0.5 * (p.x0 + p.x1)) -
                                   cuts.begin()) - 1;
    i = std::min(i, avg.size() - 1);
    avg[i] += 0.5 * (p.v0 + p.v1) * (p.x1 - p.x0);
  }
  std::vector<double> nodes, values;
  for (size_t i = 0; i < avg.size(); ++i) {
    avg[i] /= cuts[i + 1] - cuts[i];
    double lo = cuts[i], hi = cuts[i + 1];
    if (i == 0) {
      nodes.push_back(lo);
      values.push_back(avg[i]);
    }
    if (i + 1 < avg.size()) {
      nodes.push_back(0.5 * (lo + hi));
      values.push_back(avg[i]);
    } else {
      nodes.push_back(hi);
      values.push_back(avg[i]);
    }
  }
  std::vector<JumpPoint> jumps;
  for (size_t k = 0; k < w.jumps().size(); ++k) jumps.push_back({w.jumps()[k].x, avg[k], avg[k + 1]});
  std::vector<std::pair<double, double>> nv;
  for (size_t i = 0; i < nodes.size(); ++i) nv.push_back({nodes[i], values[i]});
  std::sort(nv.begin(), nv.end());
  nv.erase(std::unique(nv.begin(), nv.end(),
                       [](const auto& x, const auto& y) { return x.first == y.first; }),
           nv.end());
  nodes.clear();
  values.clear();
  for (const auto& [x, v] : nv) {
    nodes.push_back(x);
    values.push_back(v);
  }
  return Function1D(std::move(nodes), std::move(values), std::move(jumps), w.p());
}

LambdaSets lambda_slice_sets(const Function3D& u, double lambda, const ExceptionalSet3D& omega,
                             const std::vector<double>& a) {
  if (!(lambda > 1)) throw InvalidArgument("lambda: must exceed 1");
  const int n = u.slice_count();
  if (static_cast<int>(a.size()) != n) throw InvalidArgument("profile: one value per slice");
  const Grid2D& g = u.slice(0).grid();
  auto nw = u.domain().node_weights(Region::kS);
  const double delta = u.thickness(), p = u.p();
  LambdaSets s;
  s.lambda = lambda;
  for (auto* v : {&s.temporal_energy, &s.jump_count, &s.distance, &s.omega_length})
    v->assign(g.size(), 0.0);
  for (size_t q = 0; q < g.size(); ++q) {
    if (nw[q] <= 0) continue;
    s.area += nw[q];
    std::vector<double> col(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) col[k] = u.slice(k).values()[q];
    s.temporal_energy[q] = column_energy(col, delta, u.temporal_crossings()[q], u.slice_center(0), p);
    s.jump_count[q] = static_cast<double>(u.temporal_crossings()[q].size());
    for (int k = 0; k < n; ++k) {
      if (omega.in(k, q)) s.omega_length[q] += delta;
      else s.distance[q] += delta * pw(col[k] - a[k], p);
    }
    const double* f[4] = {&s.temporal_energy[q], &s.jump_count[q], &s.distance[q], &s.omega_length[q]};
    for (int i = 0; i < 4; ++i) s.totals[i] += nw[q] * *f[i];
  }
  std::vector<uint8_t>* masks[4] = {&s.A, &s.B, &s.C, &s.D};
  const std::vector<double>* vals[4] = {&s.temporal_energy, &s.jump_count, &s.distance,
                                        &s.omega_length};
  for (int i = 0; i < 4; ++i) {
    masks[i]->assign(g.size(), 0);
    double thr = lambda / s.area * s.totals[i];
    for (size_t q = 0; q < g.size(); ++q)
      if (nw[q] > 0 && (*vals[i])[q] <= thr) {
        (*masks[i])[q] = 1;
        s.measures[i] += nw[q];
      }
    if (s.measures[i] < (lambda - 1) / lambda * s.area * (1 - 1e-12)) s.markov_holds = false;
  }
  return s;
}

ColumnChoice select_columns(const Function3D& u, double delta, const ExceptionalSet3D& omega,
                            const std::vector<double>& a) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("delta: must lie in (0, 1)");
  ColumnChoice c;
  c.small = lambda_slice_sets(u, 1 + delta, omega, a);
  c.large = lambda_slice_sets(u, 8 / delta, omega, a);
  const auto &S = c.small, &L = c.large;
  bool fx = false, fy = false;
  for (size_t q = 0; q < S.A.size() && !(fx && fy); ++q) {
    if (!fx && S.A[q] && L.B[q] && L.C[q] && L.D[q]) {
      c.x = q;
      fx = true;
    }
    if (!fy && L.A[q] && S.B[q] && L.C[q] && L.D[q]) {
      c.y = q;
      fy = true;
    }
  }
  if (!fx || !fy) {
    std::ostringstream os;
    os << "no admissible column; measures at lambda = 1 + delta: " << S.measures[0] << ", "
       << S.measures[1] << ", " << S.measures[2] << ", " << S.measures[3] << " of " << S.area;
    throw DegenerateInput(os.str());
  }
  return c;
}

// ---------------------------------------------------------------- compactness

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

GammaReport compactness_pipeline(const std::vector<std::pair<double, Function3D>>& family,
                                 const GammaOptions& opt) {
  if (family.empty()) throw InvalidArgument("family: at least one eps is required");
  std::vector<size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t i, size_t j) { return family[i].first < family[j].first; });
  for (const auto& [eps, u] : family) {
    if (!(eps > 0)) throw ValidationError(std::vector<FieldError>{{"eps", "must be positive"}});
    require_p(u.p(), "compactness");
  }
  GammaReport rep;
  std::vector<double> lx, ly;
  for (size_t i : order) {
    GammaEntry e;
    e.eps = family[i].first;
    e.parts = energy_parts(family[i].second);
    e.F_eps = e.parts.total(e.eps);
    if (e.F_eps > 0) {
      lx.push_back(std::log(1 / e.eps));
      ly.push_back(std::log(e.F_eps));
    }
    rep.entries.push_back(std::move(e));
  }
  rep.energy_slope = fit_slope(lx, ly);
  if (rep.entries.size() > 1 && rep.energy_slope > opt.slope_guard) {
    std::ostringstream os;
    os << "energy: F_eps grows like eps^-" << rep.energy_slope
       << " over the family, so sup F_eps is not finite; refusing to extract a limit";
    throw UnboundedEnergy(os.str());
  }

  std::vector<std::vector<double>> profiles(order.size());
  std::vector<ExceptionalSet3D> omegas(order.size());
  for (size_t n = 0; n < order.size(); ++n) {
    const Function3D& u = family[order[n]].second;
    GammaEntry& e = rep.entries[n];
    const double area = [&] {
      auto nw = u.domain().node_weights(Region::kS);
      return std::accumulate(nw.begin(), nw.end(), 0.0);
    }();
    auto approx = stage("poincare", [&] { return approximate_3d(u, opt.approx); });
    auto pc = stage("poincare", [&] { return poincare_profile(u, approx.w, approx.omega); });
    e.omega_volume = approx.omega.volume_in_S;
    e.poincare_error = pc.error;
    auto cols = stage("lambda-sets", [&] { return select_columns(u, opt.delta, approx.omega, pc.profile); });
    e.x = cols.x;
    e.y = cols.y;
    for (int i = 0; i < 4; ++i) {
      e.lambda_measures_small[i] = cols.small.measures[i];
      e.lambda_measures_large[i] = cols.large.measures[i];
    }
    Function1D b = column_trace(u, cols.x), d = column_trace(u, cols.y);
    e.jumps_b = b.jump_count();
    e.jumps_d = d.jump_count();
    if (e.jumps_b <= e.jumps_d) {
      e.branch = "b";
      e.w = b;
    } else if (d.derivative_energy() < opt.energy_floor) {
      e.branch = "d";
      e.w = d;
    } else {
      e.branch = "removal";
      IntervalSet A = column_omega(u, approx.omega, cols.x).unite(column_omega(u, approx.omega, cols.y));
      auto jr = stage("jump-removal", [&] { return jump_removal(d, b, A); });
      e.removal_measure = jr.A_tilde.measure();
      e.w = std::move(jr.w);
    }
    e.jumps_w = e.w.jump_count();
    e.c = piecewise_average(e.w);
    e.F0_w = energy_F0(e.w, area);
    e.energy_ratio = nan_safe_ratio(e.F0_w, e.F_eps);
    e.jump_bound = (1 + opt.delta) / area * e.parts.temporal_jump;
    omegas[n] = std::move(approx.omega);
  }

  // Limit candidate: mean of w - c over the two smallest eps.
  const size_t m = std::min<size_t>(2, rep.entries.size());
  auto W = [&](double x) {
    double s = 0;
    for (size_t i = 0; i < m; ++i) s += rep.entries[i].w(x) - rep.entries[i].c(x);
    return s / m;
  };
  std::vector<double> dx, dy;
  for (size_t n = 0; n < order.size(); ++n) {
    const Function3D& u = family[order[n]].second;
    GammaEntry& e = rep.entries[n];
    auto nw = u.domain().node_weights(Region::kS);
    for (int k = 0; k < u.slice_count(); ++k) {
      double x = u.slice_center(k);
      double shift = e.c(x) + W(x);
      const auto& v = u.slice(k).values();
      for (size_t q = 0; q < nw.size(); ++q)
        if (nw[q] > 0 && std::abs(v[q] - shift) > opt.tolerance) e.diagnostic += u.thickness() * nw[q];
    }
    if (e.diagnostic > 0) {
      dx.push_back(std::log(e.eps));
      dy.push_back(std::log(e.diagnostic));
    }
    if (n > 0 && e.diagnostic < rep.entries[n - 1].diagnostic) rep.diagnostic_monotone = false;
  }
  rep.diagnostic_slope = fit_slope(dx, dy);
  rep.liminf_ratio = nan_safe_ratio(rep.entries.front().F_eps, rep.entries.front().F0_w);
  return rep;
}

}  // namespace sbv
