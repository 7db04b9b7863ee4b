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

// Minimal SVG emitter: world coordinates with y pointing up, fixed
// number formatting so that output is byte-stable.

#include <string>
#include <vector>

#include "geometry.hpp"

namespace sbv {

class Svg {
 public:
  Svg(Vec2 lo, Vec2 hi, int width_px = 640);

  void circle(Vec2 c, double r, const std::string& stroke, const std::string& fill = "none",
              double fill_opacity = 1.0);
  void polyline(const std::vector<Vec2>& points, const std::string& stroke, double width = 1.0);
  void rect(Vec2 lo, Vec2 hi, const std::string& stroke, const std::string& fill = "none");
  void text(Vec2 at, const std::string& s, double size_px = 12);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  Vec2 lo_, hi_;
  int w_ = 640, h_ = 640;
  double scale_ = 1.0;
  std::string body_;
};

// Points (x, y) on log-log axes with the line log y = intercept + slope log x.
std::string loglog_plot(const std::vector<double>& x, const std::vector<double>& y, double slope,
                        double intercept, const std::string& title);

// Least-squares slope and intercept of log y against log x over the
// entries with x, y > 0.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sbv
