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

// Two-dimensional approximation: cover the jump set, grow the cover for a
// time horizon T, pick a good intermediate time t0, and replace u inside
// each grown ball by its radial interpolation of the boundary trace.

#include <string>
#include <vector>

#include "ball_construction.hpp"
#include "gsbv_model.hpp"

namespace sbv {

// 1 + pi^{p+1}
double radial_fill_constant(double p);

struct RadialPatch {
  Ball ball;
  std::vector<double> trace;  // samples at angles 2 pi k / M
  double mean = 0.0;
  double patch_energy = 0.0;     // \int_B |grad w|^p for the piecewise-linear trace
  double boundary_energy = 0.0;  // r \oint |d_tau U|^p, tangential part only
  int crossings = 0;             // trace samples separated by a jump

  // Interpolated value at a point of the closed ball.
  double value(Vec2 x) const;
};

// Samples U on the circle at max(16, 4 ceil(2 pi r / h)) angles unless
// `samples` is positive.
RadialPatch radial_fill(const PiecewiseFunction2D& U, const Ball& ball, int samples = 0);

// Patch from an explicit trace (used by the oracle tests).
RadialPatch radial_fill_from_trace(const Ball& ball, std::vector<double> trace, double p);

// |grad U|^p as a nonnegative field on cell centers, zero outside S'.
GridFunction2D gradient_density(const PiecewiseFunction2D& U);

struct T0Selection {
  double t0 = 0.0;
  double profile_at_t0 = 0.0;
  double bound = 0.0;  // (1/T) \int_{S'} |grad U|^p
  std::vector<ProfilePoint> profile;
  bool within_bound = true;
};

T0Selection select_t0(const ConstructionTrace& trace, const PiecewiseFunction2D& U, double T,
                      int n_times = 64, int samples_per_circle = 256, double slack = 0.02);

struct Stitch {
  std::vector<double> values;   // U with every ball interior replaced by its fill
  std::vector<int> owner;       // index of the filling patch per node, -1 outside
  std::vector<RadialPatch> patches;
  std::vector<JumpCurve> residual;
  int crossings = 0;
  std::vector<std::string> warnings;
};

Stitch fill_balls(const PiecewiseFunction2D& U, const std::vector<Ball>& balls,
                  double slack = 0.02, int samples = 0);

struct Approx2DOptions {
  double T = 1.0;
  double cover_radius = 0.0;  // 0: twice the lattice spacing
  int n_times = 64;
  double eta = 0.0;           // 0: margin / (2 C_cov)
  int samples_per_circle = 256;
  double slack = 0.02;
};

struct ApproxResult2D {
  PiecewiseFunction2D u;       // input
  PiecewiseFunction2D U;       // extension to S'
  PiecewiseFunction2D w;       // output, jump-free on S
  std::vector<Ball> cover;
  ConstructionTrace trace;
  std::vector<Ball> omega;     // active balls at t0 meeting S
  std::vector<Ball> active_t0; // all active balls at t0
  std::vector<RadialPatch> patches;
  T0Selection selection;
  double T = 0.0;
  double t0 = 0.0;

  double jump_length = 0.0;           // H^1(J_u)
  double jump_length_extended = 0.0;  // H^1(J_U)
  double sum_radii = 0.0;             // of the cover
  double covering_constant = 0.0;     // sum_radii / H^1(J_u)
  double eta = 0.0;
  double perimeter = 0.0;             // 2 pi sum r_i(t0) over the active family
  double omega_area = 0.0;            // |omega ∩ S| on the lattice
  double energy_u = 0.0;
  double energy_U = 0.0;              // on S'
  double energy_w = 0.0;
  double extension_energy_ratio = 1.0;
  double extension_jump_ratio = 1.0;
  double energy_constant = 0.0;       // T (C_ext - 1) + C_ext (1 + pi^{p+1})
  size_t changed_outside_omega = 0;   // lattice nodes of S outside omega with w != u
  size_t residual_cut_edges = 0;      // cut edges of w inside S
  double residual_jump_length = 0.0;
  int trace_crossings = 0;
  std::vector<std::string> warnings;
};

ApproxResult2D approximate_2d(const PiecewiseFunction2D& u, const Approx2DOptions& opt = {});

}  // namespace sbv
