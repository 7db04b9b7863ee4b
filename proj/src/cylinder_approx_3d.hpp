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

// Slice-wise approximation on Omega = I x S. The jump surface is squeezed
// in the spatial directions by delta, covered by balls, and every ball is
// replaced by the cylinder over its spatial projection. On each time slice
// the cylinders leave a disk family which is grown and filled as in 2D; the
// slices whose disks are too large in total are excised whole.

#include <cstdint>
#include <string>
#include <vector>

#include "ball_construction.hpp"
#include "gsbv_model.hpp"
#include "sobolev_approx_2d.hpp"

namespace sbv {

struct Ball3 {
  Vec3 center;
  double radius = 0.0;
  int id = 0;
};

struct Rescaled {
  double delta = 0.0;             // transverse mass / H^2
  double area = 0.0;              // H^2(J_U)
  double transverse = 0.0;        // \int |nu'| dH^2
  double rescaled_area = 0.0;     // H^2 of the squeezed surface
  std::vector<Triangle3> surface; // (x1, delta x2, delta x3)
  bool degenerate() const { return !(delta > 0); }
};

// delta = 0 (no spatial jump) is returned as a degenerate result.
Rescaled anisotropic_rescale(const std::vector<Triangle3>& surface);

// Balls of radius rho covering the surface: slabs of width rho in x1, each
// slab's piece of the surface projected to x' and covered by a square
// lattice of spacing 0.99 rho sqrt(3/2).
std::vector<Ball3> layered_cover(const std::vector<Triangle3>& surface, double rho);

struct Cylinder {
  double x1_lo = 0.0, x1_hi = 0.0;
  Ball base;  // in original spatial coordinates
};

struct CylinderFamily {
  double delta = 0.0;
  double rho = 0.0;                        // cover radius in squeezed coordinates
  std::vector<Ball3> cover;
  std::vector<Cylinder> cylinders;
  std::vector<std::vector<Ball>> slices;   // disks met by each slice center
  std::vector<double> slice_sums;          // sum of radii per slice
  double integral = 0.0;                   // sum_k Delta * slice_sums[k]
};

// rho <= 0 picks max(Delta / 2, sqrt(H^2(squeezed) / 4000)).
CylinderFamily build_cylinders(const Function3D& u, const Rescaled& r, double rho);

std::vector<uint8_t> admissible_slices(const CylinderFamily& fam, double eta);

struct ExceptionalSet3D {
  std::vector<uint8_t> admissible;
  std::vector<std::vector<Ball>> disks;  // per slice, at time `time`
  double time = 0.0;
  std::vector<uint8_t> mask;             // [slice * nodes + node] over the S' lattice
  int nodes = 0;
  double volume = 0.0;                   // over S'
  double volume_in_S = 0.0;
  double perimeter[3] = {0, 0, 0};       // lattice faces normal to x1, x2, x3 on the boundary
  double inadmissible_measure = 0.0;
  double sum_radii_integral = 0.0;       // \int_{I_ad} sum_i r_i(time) dx1
  bool in(int slice, size_t node) const {
    return mask[static_cast<size_t>(slice) * static_cast<size_t>(nodes) + node] != 0;
  }
};

// Voxel set of the given per-slice disks plus whole inadmissible slices.
ExceptionalSet3D exceptional_set(const Function3D& u, const std::vector<uint8_t>& admissible,
                                 std::vector<std::vector<Ball>> disks, double time);

// Runs the ball construction on every admissible slice up to T.
std::vector<ConstructionTrace> sliced_construction(const CylinderFamily& fam,
                                                   const std::vector<uint8_t>& admissible,
                                                   double T, int threads = 1);

struct Approx3DOptions {
  double T = 1.0;
  double cover_radius = 0.0;  // squeezed coordinates; 0 picks the default
  double eta = 0.0;           // 0: margin e^{-T} / 2
  int n_times = 64;
  int samples_per_circle = 128;
  bool enforce_guard = true;
  double slack = 0.02;
  int threads = 1;
};

struct ApproxResult3D {
  Function3D U;                 // slice-wise extension
  Function3D w;
  Rescaled rescaled;
  CylinderFamily family;
  std::vector<ConstructionTrace> traces;
  ExceptionalSet3D omega;       // at t0
  ExceptionalSet3D grown;       // E_T, at the horizon
  double T = 0.0, t0 = 0.0;
  double eta = 0.0;
  double cylinder_constant = 0.0;   // \int sum r dx1 / transverse
  double markov_bound = 0.0;        // \int sum r dx1 / eta
  std::vector<ProfilePoint> profile;  // slice-aggregated
  double profile_at_t0 = 0.0;
  double profile_bound = 0.0;       // 4/T \int_{I_ad} \int_{S'} |grad' U|^p
  double energy_u_spatial = 0.0;
  double energy_U_spatial = 0.0;    // on I_ad x S'
  double energy_w_spatial = 0.0;
  double zeroed_measure = 0.0;
  size_t changed_outside_omega = 0;
  size_t residual_cut_edges = 0;
  int trace_crossings = 0;
  std::vector<std::string> warnings;
};

ApproxResult3D approximate_3d(const Function3D& u, const Approx3DOptions& opt = {});

struct PoincareResult {
  std::vector<double> profile;  // a(x1_k)
  double error = 0.0;           // \int_{Omega \ omega} |u - a|^p
  double spatial_energy = 0.0;  // \int_Omega |grad' u|^p
  double ratio = 0.0;           // error / spatial_energy (0 when both vanish)
};

PoincareResult poincare_profile(const Function3D& u, const Function3D& w,
                                const ExceptionalSet3D& omega);

// Lateral surface and (optionally) end caps of (x_lo, x_hi) x B(c, r): the
// lateral polygon keeps the perimeter, the caps keep the area.
std::vector<Triangle3> cylinder_surface(double x_lo, double x_hi, Vec2 c, double r, int segments,
                                        bool caps);

// {x1} x S as triangles: two for a rectangle, a circumscribed fan for a
// disk so that every column of S meets it.
std::vector<Triangle3> plane_surface(const Domain2D& d, double x1, int segments = 4096);

enum class CounterexampleKind { kA, kB };

struct CounterexampleOptions {
  double margin = 6.0;
  double grid = 0.1;
  int slices = 256;
  int segments = 256;  // polygon resolution of the circular jump surfaces
  double p = 2.0;
};

// (a): u = 0 on (-h/2, h/2) x B(0, 1/2), 1 elsewhere.
// (b): u = 0 on (-1, 1) x B(0, h), 1 elsewhere.   I = (-1, 1), S = B(0, 1).
Function3D counterexample_family(CounterexampleKind kind, double h,
                                 const CounterexampleOptions& opt = {});

struct StripSet {
  std::vector<uint8_t> columns;   // lattice cell columns [x_i, x_{i+1}] met by the strip
  std::vector<std::pair<double, double>> intervals;  // x1-projection of J_u, merged
  double area = 0.0;              // |omega ∩ S|
  double bound = 0.0;             // \int_{J_u} |nu_2| dH^1
  double perimeter_x2 = 0.0;      // variation of the strip mask across rows inside S
};

StripSet strip_exceptional(const PiecewiseFunction2D& u);

}  // namespace sbv
