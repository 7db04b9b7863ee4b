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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sbv {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

Svg::Svg(Vec2 lo, Vec2 hi, int width_px) : lo_(lo), hi_(hi), w_(width_px) {
  double dx = std::max(hi.x - lo.x, 1e-12), dy = std::max(hi.y - lo.y, 1e-12);
  scale_ = w_ / dx;
  h_ = std::max(1, static_cast<int>(std::lround(dy * scale_)));
}

double Svg::px(double x) const { return (x - lo_.x) * scale_; }
double Svg::py(double y) const { return (hi_.y - y) * scale_; }

void Svg::circle(Vec2 c, double r, const std::string& stroke, const std::string& fill,
                 double fill_opacity) {
  body_ += "<circle cx=\"" + fmt(px(c.x)) + "\" cy=\"" + fmt(py(c.y)) + "\" r=\"" +
           fmt(r * scale_) + "\" stroke=\"" + stroke + "\" fill=\"" + fill +
           "\" fill-opacity=\"" + fmt(fill_opacity) + "\"/>\n";
}

void Svg::polyline(const std::vector<Vec2>& points, const std::string& stroke, double width) {
  if (points.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
           "\" points=\"";
  for (size_t k = 0; k < points.size(); ++k)
    body_ += (k ? " " : "") + fmt(px(points[k].x)) + "," + fmt(py(points[k].y));
  body_ += "\"/>\n";
}

void Svg::rect(Vec2 lo, Vec2 hi, const std::string& stroke, const std::string& fill) {
  body_ += "<rect x=\"" + fmt(px(lo.x)) + "\" y=\"" + fmt(py(hi.y)) + "\" width=\"" +
           fmt((hi.x - lo.x) * scale_) + "\" height=\"" + fmt((hi.y - lo.y) * scale_) +
           "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\"/>\n";
}

void Svg::text(Vec2 at, const std::string& s, double size_px) {
  body_ += "<text x=\"" + fmt(px(at.x)) + "\" y=\"" + fmt(py(at.y)) + "\" font-size=\"" +
           fmt(size_px) + "\" font-family=\"sans-serif\">" + escape(s) + "</text>\n";
}

std::string Svg::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
         "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " +
         std::to_string(h_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < x.size() && k < y.size(); ++k) {
    if (!(x[k] > 0 && y[k] > 0)) continue;
    double lx = std::log(x[k]), ly = std::log(y[k]);
    n += 1;
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (n < 2 || std::abs(den) < 1e-300) return {NAN, NAN};
  double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

std::string loglog_plot(const std::vector<double>& x, const std::vector<double>& y, double slope,
                        double intercept, const std::string& title) {
  std::vector<Vec2> pts;
  for (size_t k = 0; k < x.size() && k < y.size(); ++k)
    if (x[k] > 0 && y[k] > 0) pts.push_back({std::log10(x[k]), std::log10(y[k])});
  Vec2 lo{0, 0}, hi{1, 1};
  if (!pts.empty()) {
    lo = hi = pts.front();
    for (auto p : pts) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
  }
  double padx = std::max(0.1, 0.15 * (hi.x - lo.x)), pady = std::max(0.1, 0.15 * (hi.y - lo.y));
  lo = {lo.x - padx, lo.y - pady};
  hi = {hi.x + padx, hi.y + 2 * pady};
  // Keep the picture square-ish whatever the data ranges are.
  double sx = hi.x - lo.x, sy = hi.y - lo.y;
  Vec2 stretch{1.0, sx / sy};
  auto map = [&](Vec2 p) { return Vec2{p.x, lo.y + (p.y - lo.y) * stretch.y}; };
  Svg svg(lo, {hi.x, lo.y + sy * stretch.y}, 480);
  svg.rect(lo, {hi.x, lo.y + sy * stretch.y}, "#999999");
  for (auto p : pts) svg.circle(map(p), 0.012 * sx, "#1f77b4", "#1f77b4");
  if (std::isfinite(slope) && std::isfinite(intercept)) {
    auto line = [&](double lx) {
      double ln = lx * std::log(10.0);
      return map({lx, (intercept + slope * ln) / std::log(10.0)});
    };
    svg.polyline({line(lo.x + padx / 2), line(hi.x - padx / 2)}, "#d62728", 1.5);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "slope %.4f", slope);
  svg.text(map({lo.x + padx / 4, hi.y - pady / 2}), title + "  (" + buf + ")", 13);
  return svg.str();
}

}  // namespace sbv
