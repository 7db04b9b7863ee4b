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

// Grid-sampled piecewise-smooth functions with exact jump geometry.
//
// A PiecewiseFunction2D lives on the lattice of the extended domain S'. Its
// jump set is a list of polylines; lattice edges crossing a polyline are
// "cut" and excluded from finite differences, so the differences that remain
// represent the absolutely continuous gradient only.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ball_construction.hpp"
#include "geometry.hpp"
#include "grid.hpp"

namespace sbv {

enum class DomainShape { kRectangle, kDisk };

// kReflect: values outside S are produced by extend() from values on S.
// kGiven: the function is supplied on all of S' and extend() keeps it.
enum class ExtensionMode { kReflect, kGiven };

enum class Region { kS, kExtended };

struct Domain2D {
  DomainShape shape = DomainShape::kRectangle;
  Vec2 lo{0, 0}, hi{1, 1};      // rectangle S = [lo, hi]
  Vec2 center{0, 0};            // disk S = B(center, radius)
  double radius = 1.0;
  double margin = 0.25;         // S' = S dilated by margin
  double h = 0.01;              // lattice spacing
  ExtensionMode extension = ExtensionMode::kReflect;

  // Throws InvalidArgument naming the offending field.
  void validate() const;

  bool in_S(Vec2 p) const;
  bool in_extended(Vec2 p) const;
  bool in(Region r, Vec2 p) const { return r == Region::kS ? in_S(p) : in_extended(p); }
  double distance_to_S(Vec2 p) const;  // 0 on S
  double area() const;
  double extended_area() const;

  // Lattice covering S'. Rectangle corners and the disk center are nodes.
  Grid2D grid() const;

  // Reflection of a point of S' \ S into S (identity on S).
  Vec2 reflect(Vec2 p) const;

  // |cell ∩ region| for every lattice cell (index (i,j) with i < nx-1, j < ny-1,
  // stored at grid.index(i,j)), and |node box ∩ region| for every node.
  std::vector<double> cell_weights(Region r) const;
  std::vector<double> node_weights(Region r) const;
};

struct JumpCurve {
  std::vector<Vec2> points;

  double length() const;
  size_t segment_count() const { return points.size() < 2 ? 0 : points.size() - 1; }
  Segment2 segment(size_t k) const { return {points[k], points[k + 1]}; }
  // Unit normal of segment k (left of the direction of travel).
  Vec2 normal(size_t k) const;
};

double jump_mass(const std::vector<JumpCurve>& curves);

struct CutEdges {
  // Indexed by grid.index(i,j): horizontal edge (i,j)-(i+1,j), vertical edge (i,j)-(i,j+1).
  std::vector<uint8_t> horizontal;
  std::vector<uint8_t> vertical;
  size_t count() const;
};

class PiecewiseFunction2D {
 public:
  PiecewiseFunction2D() = default;
  // Curves are clipped to S' and nudged off lattice lines.
  PiecewiseFunction2D(Domain2D domain, double p, std::vector<double> values,
                      std::vector<JumpCurve> curves, bool extended = false);

  static PiecewiseFunction2D sample(const Domain2D& domain, double p,
                                    const std::function<double(Vec2)>& f,
                                    std::vector<JumpCurve> curves);

  const Domain2D& domain() const { return domain_; }
  const Grid2D& grid() const { return grid_; }
  double p() const { return p_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<JumpCurve>& curves() const { return curves_; }
  const CutEdges& cuts() const { return cuts_; }
  bool extended() const { return extended_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Same geometry, new node values.
  PiecewiseFunction2D with_values(std::vector<double> values) const;
  PiecewiseFunction2D with_curves(std::vector<JumpCurve> curves) const;

  // Bilinear interpolation that ignores cell corners separated from q by a
  // jump segment, and (before extension) corners outside S.
  double evaluate(Vec2 q) const;

  // True if the straight path a->b crosses a jump segment. a, b must lie in
  // one lattice cell or adjacent ones.
  bool crosses_jump(Vec2 a, Vec2 b) const;

  // Per-cell |grad u|^p using uncut edges; stored at grid.index(i,j).
  std::vector<double> gradient_power() const;

  const std::vector<Segment2>& segments() const { return segs_; }

 private:
  void build_index();

  Domain2D domain_;
  Grid2D grid_;
  double p_ = 2.0;
  std::vector<double> values_;
  std::vector<JumpCurve> curves_;
  bool extended_ = false;
  CutEdges cuts_;
  std::vector<Segment2> segs_;
  std::vector<std::pair<uint32_t, uint32_t>> cell_index_;  // sorted (cell, segment)
  std::vector<std::string> warnings_;
};

// Midpoint sum of |grad u|^p over lattice cells, weighted by |cell ∩ region|.
double dirichlet_energy(const PiecewiseFunction2D& u, Region region = Region::kS);

struct Extension {
  PiecewiseFunction2D U;
  double energy_ratio = 1.0;  // energy(U on S') / energy(u on S)
  double jump_ratio = 1.0;    // H^1(J_U) / H^1(J_u)
  std::vector<std::string> warnings;
};

Extension extend(const PiecewiseFunction2D& u);

// Parts of the curves lying in S, one curve per clipped segment.
std::vector<JumpCurve> restrict_to_S(const std::vector<JumpCurve>& curves, const Domain2D& d);

// Chains balls of radius rho along every segment: n = ceil(len/rho) balls at
// spacing rho, the chain centered on the segment. Ids 0..k-1 in curve order.
std::vector<Ball> vitali_cover(const std::vector<JumpCurve>& curves, double rho);

// Sum of radii over H^1 of the covered set.
double covering_constant(const std::vector<Ball>& cover, double jump_length);

// ---------------------------------------------------------------- 3D

std::vector<JumpCurve> sections(const std::vector<Triangle3>& surface, double x1);

enum class JumpWeight { kFull, kTransverse, kTemporal };
double jump_mass(const std::vector<Triangle3>& surface, JumpWeight weight);

enum class Derivative { kFull, kSpatial, kTemporal };

// Function on Omega = (a,b) x S sampled on slices at x1_k = a + (k+1/2) Delta.
class Function3D {
 public:
  Function3D() = default;
  Function3D(double a, double b, std::vector<PiecewiseFunction2D> slices,
             std::vector<Triangle3> surface);

  static Function3D sample(const Domain2D& domain, double a, double b, int n_slices, double p,
                           const std::function<double(double, Vec2)>& f,
                           std::vector<Triangle3> surface);

  double a() const { return a_; }
  double b() const { return b_; }
  int slice_count() const { return static_cast<int>(slices_.size()); }
  double thickness() const { return (b_ - a_) / slice_count(); }
  double slice_center(int k) const { return a_ + (k + 0.5) * thickness(); }
  const PiecewiseFunction2D& slice(int k) const { return slices_[static_cast<size_t>(k)]; }
  const std::vector<PiecewiseFunction2D>& slices() const { return slices_; }
  const std::vector<Triangle3>& surface() const { return surface_; }
  const Domain2D& domain() const { return slices_.front().domain(); }
  double p() const { return slices_.front().p(); }

  // For every lattice node x', the jumps met by the line {x' } x I that fall
  // between two slice centers: sorted (edge k, x1) pairs, edge k joining
  // slices k and k+1.
  const std::vector<std::vector<std::pair<int, double>>>& temporal_crossings() const {
    return crossings_;
  }

 private:
  double a_ = 0, b_ = 1;
  std::vector<PiecewiseFunction2D> slices_;
  std::vector<Triangle3> surface_;
  std::vector<std::vector<std::pair<int, double>>> crossings_;
};

// Quadrature weights for differences between consecutive slice centers;
// the outer edges also carry the end half-cells so the weights sum to |I|.
std::vector<double> edge_weights(int n, double delta);

// Per-edge absolutely continuous slopes along one column. Edges holding a
// jump take the mean slope of the nearest jump-free neighbours.
std::vector<double> column_slopes(const std::vector<double>& values, double delta,
                                  const std::vector<std::pair<int, double>>& crossings);

// \int_I |d_1 u|^p along one column. On a cut edge the parts left and right
// of the crossings take the nearest clean slopes on their side, so the sum is
// exact for columns that are linear between jumps.
double column_energy(const std::vector<double>& values, double delta,
                     const std::vector<std::pair<int, double>>& crossings, double x_first,
                     double p);

double dirichlet_energy(const Function3D& u, Derivative which);

}  // namespace sbv
