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

// Anisotropic Mumford-Shah energies on thin domains and the machinery that
// extracts a one-dimensional limit from a bounded-energy family.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cylinder_approx_3d.hpp"
#include "gsbv_model.hpp"

namespace sbv {

// Finite union of disjoint open intervals, sorted.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<std::pair<double, double>> intervals);  // merges

  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
  double measure() const;
  bool contains(double x) const;
  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(double a, double b) const;

 private:
  std::vector<std::pair<double, double>> iv_;
};

struct JumpPoint {
  double x = 0.0;
  double left = 0.0;
  double right = 0.0;
};

// Continuous piecewise-linear function on [a, b] between node values, with
// finitely many jumps. A jump splits its edge into two linear pieces ending
// at the one-sided values.
class Function1D {
 public:
  Function1D() = default;
  Function1D(std::vector<double> nodes, std::vector<double> values, std::vector<JumpPoint> jumps,
             double p);

  // n uniform edges on [a, b]; f(x, piece) gives the value on the piece
  // containing x, pieces numbered left to right between the jump locations.
  static Function1D piecewise(double a, double b, int n, double p, std::vector<double> jumps,
                              const std::function<double(double, int)>& f);

  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double p() const { return p_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<JumpPoint>& jumps() const { return jumps_; }
  int jump_count() const { return static_cast<int>(jumps_.size()); }

  // Right-continuous evaluation.
  double operator()(double x) const;
  double derivative_energy() const;  // \int |u'|^p
  double derivative_norm() const;    // ||u'||_p

  // Linear pieces (x0, v0, x1, v1) in order, zero-length ones omitted.
  struct Piece {
    double x0, v0, x1, v1;
  };
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  std::vector<double> nodes_, values_;
  std::vector<JumpPoint> jumps_;
  double p_ = 2.0;
  std::vector<Piece> pieces_;
};

// (\int_{I \ excluded} |u - v|^p)^{1/p}, exact for piecewise-linear u, v.
double lp_distance(const Function1D& u, const Function1D& v, const IntervalSet& excluded = {});

// Area (int |u'|^p + #J_u).
double energy_F0(const Function1D& u, double cross_section_area);

// (1/eps) int |grad' u|^p + int |d_1 u|^p + (1/eps) int |nu'| + int |nu_1|.
struct EnergyParts {
  double spatial = 0.0, temporal = 0.0, transverse_jump = 0.0, temporal_jump = 0.0;
  double total(double eps) const {
    return (spatial + transverse_jump) / eps + temporal + temporal_jump;
  }
};
EnergyParts energy_parts(const Function3D& u);
double energy_F_eps(const Function3D& u, double eps);

// u(x) = f(x1) on I x S with planar jump surfaces {x1 = t} ∩ S. Disk
// cross-sections use a fine circumscribed polygon.
Function3D lift(const Function1D& f, const Domain2D& domain, int slices, int segments = 4096);

struct JumpRemoval {
  Function1D w;
  IntervalSet A_tilde;
  bool degenerate = false;  // some piece of u had u != v with u' = v' = 0
  double l = 0.0;           // largest length scale used
  double sup_w_minus_v = 0.0;   // ||w - v||_{L^inf(I \ A~)}
  double rhs_w_v = 0.0;         // right side of the L^inf estimate without C(M)
  double rhs_A = 0.0;           // right side of the |A~| estimate without C(M)
  double constant_w_v = 0.0;    // sup_w_minus_v / rhs_w_v (0 when both vanish)
  double constant_A = 0.0;      // |A~| / rhs_A
  double energy_w = 0.0, energy_v = 0.0;
};

// u has N jumps, v has M >= N. Jumps of v are removed piece by piece of u,
// except on the short v-intervals collected in A~.
JumpRemoval jump_removal(const Function1D& u, const Function1D& v, const IntervalSet& A);

struct LambdaSets {
  double lambda = 0.0;
  double area = 0.0;  // lattice measure of S
  // Per node of S (weight > 0): column quantities and their lattice totals.
  std::vector<double> temporal_energy, jump_count, distance, omega_length;
  double totals[4] = {0, 0, 0, 0};
  std::vector<uint8_t> A, B, C, D;  // over the lattice, 0 outside S
  double measures[4] = {0, 0, 0, 0};
  bool markov_holds = true;         // every measure >= (lambda-1)/lambda area
};

LambdaSets lambda_slice_sets(const Function3D& u, double lambda, const ExceptionalSet3D& omega,
                             const std::vector<double>& a);

struct ColumnChoice {
  size_t x = 0, y = 0;  // lattice nodes
  LambdaSets small, large;  // lambda = 1 + delta and 8 / delta
};

// Smallest nodes in A^{1+d} B^{8/d} C^{8/d} D^{8/d} and A^{8/d} B^{1+d} C^{8/d} D^{8/d}.
ColumnChoice select_columns(const Function3D& u, double delta, const ExceptionalSet3D& omega,
                            const std::vector<double>& a);

// The column x1 -> u(x1, x') as a Function1D: linear between slice centers,
// extended linearly to the ends, with a jump at every temporal crossing.
Function1D column_trace(const Function3D& u, size_t node);

// Slices of omega over one column.
IntervalSet column_omega(const Function3D& u, const ExceptionalSet3D& omega, size_t node);

// Between-jump averages of w.
Function1D piecewise_average(const Function1D& w);

struct GammaOptions {
  double delta = 0.25;
  double tolerance = 0.05;      // convergence-in-measure threshold
  double slope_guard = 0.5;     // refuse when F_eps grows like eps^{-s}, s above this
  double energy_floor = 1e-8;   // "d_eps has vanishing derivative energy"
  Approx3DOptions approx;
};

struct GammaEntry {
  double eps = 0.0;
  double F_eps = 0.0;
  EnergyParts parts;
  double F0_w = 0.0;
  double energy_ratio = 0.0;  // F0(w) / F_eps(u)
  std::string branch;  // "b", "d" or "removal"
  size_t x = 0, y = 0;
  int jumps_b = 0, jumps_d = 0, jumps_w = 0;
  double jump_bound = 0.0;  // (1 + delta) / |S| * int |nu_1|
  double lambda_measures_small[4] = {0, 0, 0, 0};
  double lambda_measures_large[4] = {0, 0, 0, 0};
  double omega_volume = 0.0, poincare_error = 0.0;
  double removal_measure = 0.0;  // |A~| when the removal branch ran
  double diagnostic = 0.0;       // |{|u - c - W| > tol}|
  Function1D w, c;
};

struct GammaReport {
  std::vector<GammaEntry> entries;  // ascending eps
  double energy_slope = 0.0;         // d log F / d log(1/eps)
  double diagnostic_slope = 0.0;     // d log diag / d log eps over positive entries
  bool diagnostic_monotone = true;   // nonincreasing as eps decreases
  double liminf_ratio = 0.0;         // F_eps / F0(w) at the smallest eps
};

// family: (eps, u_eps) pairs. Runs every stage and throws with the stage name.
GammaReport compactness_pipeline(const std::vector<std::pair<double, Function3D>>& family,
                                 const GammaOptions& opt = {});

}  // namespace sbv
