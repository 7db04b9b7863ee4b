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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "geometry.hpp"

namespace sbv {

// Uniform tensor-product lattice of nodes origin + (i*h, j*h), i < nx, j < ny.
struct Grid2D {
  Vec2 origin;
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  size_t size() const { return static_cast<size_t>(nx) * static_cast<size_t>(ny); }
  size_t index(int i, int j) const {
    return static_cast<size_t>(j) * static_cast<size_t>(nx) + static_cast<size_t>(i);
  }
  Vec2 node(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
  Vec2 node(size_t k) const {
    return node(static_cast<int>(k % static_cast<size_t>(nx)),
                static_cast<int>(k / static_cast<size_t>(nx)));
  }
  Vec2 cell_center(int i, int j) const {
    return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h};
  }
  double xmax() const { return origin.x + (nx - 1) * h; }
  double ymax() const { return origin.y + (ny - 1) * h; }
  bool operator==(const Grid2D&) const = default;
};

// Scalar samples on a lattice, bilinearly interpolated, zero outside.
struct GridFunction2D {
  Grid2D grid;
  std::vector<double> values;

  double operator()(Vec2 p) const {
    double fx = (p.x - grid.origin.x) / grid.h;
    double fy = (p.y - grid.origin.y) / grid.h;
    if (fx < 0 || fy < 0 || fx > grid.nx - 1 || fy > grid.ny - 1) return 0.0;
    int i = std::min(static_cast<int>(fx), grid.nx - 2);
    int j = std::min(static_cast<int>(fy), grid.ny - 2);
    double s = fx - i, t = fy - j;
    return (1 - s) * (1 - t) * values[grid.index(i, j)] +
           s * (1 - t) * values[grid.index(i + 1, j)] +
           (1 - s) * t * values[grid.index(i, j + 1)] +
           s * t * values[grid.index(i + 1, j + 1)];
  }

  // Mass of the bilinear interpolant (trapezoid rule is exact for it).
  double integral() const {
    double sum = 0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        double w = ((i == 0 || i == grid.nx - 1) ? 0.5 : 1.0) *
                   ((j == 0 || j == grid.ny - 1) ? 0.5 : 1.0);
        sum += w * values[grid.index(i, j)];
      }
    return sum * grid.h * grid.h;
  }
};

}  // namespace sbv
