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

#include "scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace sbv {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double t) { return std::abs(t) < 1 ? std::exp(1 - 1 / (1 - t * t)) : 0.0; }

double dot3(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Point3 sub3(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point3 cross3(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Reads one JSON object, writing every value it hands out (defaults
// included) into `out`. Keys never asked for are reported by finish().
class Reader {
 public:
  Reader(const Json& in, std::string path, std::vector<FieldError>& errors, Json& out)
      : in_(in), path_(std::move(path)), errors_(errors), out_(out) {
    if (!in_.is_object()) fail("", "expected an object");
    out_ = Json::object();
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void fail(const std::string& key, const std::string& msg) {
    errors_.push_back({key.empty() ? (path_.empty() ? "<root>" : path_) : at(key), msg});
  }
  bool has(const std::string& key) const { return in_.is_object() && in_.contains(key); }

  double number(const std::string& key, double def) {
    seen_.insert(key);
    double v = def;
    if (has(key)) {
      if (in_[key].is_number()) v = in_[key].get<double>();
      else fail(key, "expected a number");
    }
    out_[key] = v;
    return v;
  }
  int integer(const std::string& key, int def) {
    seen_.insert(key);
    int v = def;
    if (has(key)) {
      if (in_[key].is_number_integer()) v = in_[key].get<int>();
      else fail(key, "expected an integer");
    }
    out_[key] = v;
    return v;
  }
  uint64_t unsigned64(const std::string& key, uint64_t def) {
    seen_.insert(key);
    uint64_t v = def;
    if (has(key)) {
      const Json& x = in_[key];
      if (x.is_number_unsigned()) v = x.get<uint64_t>();
      else if (x.is_number_integer() && x.get<int64_t>() >= 0) v = static_cast<uint64_t>(x.get<int64_t>());
      else fail(key, "expected a nonnegative integer");
    }
    out_[key] = v;
    return v;
  }
  bool boolean(const std::string& key, bool def) {
    seen_.insert(key);
    bool v = def;
    if (has(key)) {
      if (in_[key].is_boolean()) v = in_[key].get<bool>();
      else fail(key, "expected true or false");
    }
    out_[key] = v;
    return v;
  }
  std::string string(const std::string& key, const std::string& def,
                     const std::vector<std::string>& allowed = {}) {
    seen_.insert(key);
    std::string v = def;
    if (has(key)) {
      if (in_[key].is_string()) v = in_[key].get<std::string>();
      else fail(key, "expected a string");
    }
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(key, "must be one of " + list);
    }
    out_[key] = v;
    return v;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> def, size_t size = 0) {
    seen_.insert(key);
    std::vector<double> v = std::move(def);
    if (has(key)) {
      const Json& a = in_[key];
      if (!a.is_array()) {
        fail(key, "expected an array of numbers");
      } else {
        v.clear();
        for (const auto& x : a) {
          if (!x.is_number()) {
            fail(key, "expected an array of numbers");
            break;
          }
          v.push_back(x.get<double>());
        }
      }
    }
    if (size && v.size() != size) fail(key, "expected " + std::to_string(size) + " numbers");
    out_[key] = v;
    return v;
  }
  Point3 point(const std::string& key, Point3 def, size_t size = 3) {
    std::vector<double> d(def.begin(), def.begin() + static_cast<long>(size));
    auto v = numbers(key, d, size);
    Point3 p{0, 0, 0};
    for (size_t k = 0; k < std::min<size_t>(v.size(), 3); ++k) p[k] = v[k];
    return p;
  }
  // Raw access for arrays of objects and nested values.
  const Json* raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? &in_[key] : nullptr;
  }
  Json& out(const std::string& key) { return out_[key]; }

  void finish() {
    if (!in_.is_object()) return;
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown field");
  }

 private:
  const Json& in_;
  std::string path_;
  std::vector<FieldError>& errors_;
  Json& out_;
  std::set<std::string> seen_;
};

Domain2D read_domain(Reader& r) {
  Domain2D d;
  std::string shape = r.string("shape", "rectangle", {"rectangle", "disk"});
  d.shape = shape == "disk" ? DomainShape::kDisk : DomainShape::kRectangle;
  if (d.shape == DomainShape::kRectangle) {
    Point3 lo = r.point("lo", {0, 0, 0}, 2), hi = r.point("hi", {1, 1, 0}, 2);
    d.lo = {lo[0], lo[1]};
    d.hi = {hi[0], hi[1]};
    if (!(d.hi.x > d.lo.x && d.hi.y > d.lo.y)) r.fail("hi", "must exceed lo in both coordinates");
  } else {
    Point3 c = r.point("center", {0, 0, 0}, 2);
    d.center = {c[0], c[1]};
    d.radius = r.number("radius", 1.0);
    if (!(d.radius > 0)) r.fail("radius", "must be positive");
  }
  d.margin = r.number("margin", 0.25);
  if (!(d.margin > 0)) r.fail("margin", "must be positive");
  d.h = r.number("grid", 0.01);
  if (!(d.h > 0)) r.fail("grid", "must be positive");
  double extent = d.shape == DomainShape::kRectangle ? std::min(d.hi.x - d.lo.x, d.hi.y - d.lo.y)
                                                     : 2 * d.radius;
  if (d.h > 0 && extent > 0 && d.h > extent / 2) r.fail("grid", "must be at most half the extent of S");
  if (d.h > 0 && d.margin > 0 && extent / d.h + 2 * d.margin / d.h > 8000)
    r.fail("grid", "lattice larger than 8000 nodes per side");
  std::string ext = r.string("extension", "reflect", {"reflect", "given"});
  d.extension = ext == "given" ? ExtensionMode::kGiven : ExtensionMode::kReflect;
  r.finish();
  return d;
}

Term read_term(Reader& r, int dim) {
  Term t;
  std::string kind = r.string("type", "constant",
                              {"constant", "linear", "sin", "bump", "crack", "crack3d"});
  t.eps_power = r.number("eps_power", 0.0);
  if (kind == "constant") {
    t.kind = Term::Kind::kConstant;
    t.amplitude = r.number("value", 0.0);
  } else if (kind == "linear") {
    t.kind = Term::Kind::kLinear;
    auto c = r.numbers("coef", std::vector<double>(static_cast<size_t>(dim) + 1, 0.0),
                       static_cast<size_t>(dim) + 1);
    for (size_t k = 0; k < c.size() && k < 4; ++k) t.coef[k] = c[k];
  } else if (kind == "sin") {
    t.kind = Term::Kind::kSin;
    t.amplitude = r.number("amplitude", 1.0);
    t.wave = r.point("wave", {0, 0, 0}, static_cast<size_t>(dim));
    t.phase = r.number("phase", 0.0);
  } else if (kind == "bump") {
    t.kind = Term::Kind::kBump;
    t.amplitude = r.number("amplitude", 1.0);
    t.center = r.point("center", {0, 0, 0}, static_cast<size_t>(dim));
    t.width = r.number("width", 0.1);
    if (!(t.width > 0)) r.fail("width", "must be positive");
  } else if (kind == "crack") {
    t.kind = Term::Kind::kCrack;
    if (dim != 2) r.fail("type", "crack terms are planar; use crack3d in 3D");
    t.amplitude = r.number("amplitude", 1.0);
    t.center = r.point("center", {0, 0, 0}, 2);
    t.angle = r.number("angle", 0.0);
    t.length = r.number("length", 0.05);
    t.width = r.number("width", 0.02);
    if (!(t.length > 0)) r.fail("length", "must be positive");
    if (!(t.width > 0)) r.fail("width", "must be positive");
  } else {
    t.kind = Term::Kind::kCrack3D;
    if (dim != 3) r.fail("type", "crack3d terms need an interval");
    t.amplitude = r.number("amplitude", 1.0);
    t.center = r.point("center", {0.5, 0.5, 0.5});
    t.axis_u = r.point("axis_u", {0, 1, 0});
    t.axis_v = r.point("axis_v", {0, 0, 1});
    t.length = r.number("length_u", 0.1);
    t.length_v = r.number("length_v", 0.1);
    t.width = r.number("width", 0.02);
    double nu = std::sqrt(dot3(t.axis_u, t.axis_u)), nv = std::sqrt(dot3(t.axis_v, t.axis_v));
    if (!(nu > 0) || !(nv > 0)) {
      r.fail("axis_u", "axes must be nonzero");
    } else {
      for (auto& x : t.axis_u) x /= nu;
      for (auto& x : t.axis_v) x /= nv;
      Point3 n = cross3(t.axis_u, t.axis_v);
      if (std::sqrt(dot3(n, n)) < 1e-6) r.fail("axis_v", "axes must not be parallel");
      // Orthonormalize v against u.
      double c = dot3(t.axis_u, t.axis_v);
      for (int k = 0; k < 3; ++k) t.axis_v[k] -= c * t.axis_u[k];
      double nv2 = std::sqrt(dot3(t.axis_v, t.axis_v));
      if (nv2 > 0)
        for (auto& x : t.axis_v) x /= nv2;
    }
    if (!(t.length > 0 && t.length_v > 0)) r.fail("length_u", "lengths must be positive");
    if (!(t.width > 0)) r.fail("width", "must be positive");
  }
  r.finish();
  return t;
}

RegionPiece read_region(Reader& r, int dim) {
  RegionPiece g;
  std::string shape = r.string("type", "halfspace", {"halfspace", "ball", "box", "cylinder"});
  g.value = r.number("value", 0.0);
  const auto n = static_cast<size_t>(dim);
  if (shape == "halfspace") {
    g.shape = RegionPiece::Shape::kHalfspace;
    g.normal = r.point("normal", {1, 0, 0}, n);
    g.offset = r.number("offset", 0.0);
  } else if (shape == "ball") {
    g.shape = RegionPiece::Shape::kBall;
    g.center = r.point("center", {0, 0, 0}, n);
    g.radius = r.number("radius", 0.0);
    if (!(g.radius > 0)) r.fail("radius", "must be positive");
  } else if (shape == "cylinder") {
    g.shape = RegionPiece::Shape::kCylinder;
    if (dim != 3) r.fail("type", "cylinder regions need an interval");
    g.lo[0] = r.number("x_lo", 0.0);
    g.hi[0] = r.number("x_hi", 1.0);
    Point3 c = r.point("center", {0, 0, 0}, 2);
    g.center = {0, c[0], c[1]};
    g.radius = r.number("radius", 0.5);
    if (!(g.radius > 0)) r.fail("radius", "must be positive");
  } else {
    g.shape = RegionPiece::Shape::kBox;
    g.lo = r.point("lo", {0, 0, 0}, n);
    g.hi = r.point("hi", {0, 0, 0}, n);
  }
  r.finish();
  return g;
}

void append_crack_geometry(const Term& t, std::vector<JumpCurve>& curves,
                           std::vector<Triangle3>& surface) {
  if (t.kind == Term::Kind::kCrack) {
    Vec2 c{t.center[0], t.center[1]}, d{std::cos(t.angle), std::sin(t.angle)};
    curves.push_back(JumpCurve{{c - d * (t.length / 2), c + d * (t.length / 2)}});
  } else if (t.kind == Term::Kind::kCrack3D) {
    auto corner = [&](double su, double sv) {
      Vec3 p;
      p.x = t.center[0] + su * t.length / 2 * t.axis_u[0] + sv * t.length_v / 2 * t.axis_v[0];
      p.y = t.center[1] + su * t.length / 2 * t.axis_u[1] + sv * t.length_v / 2 * t.axis_v[1];
      p.z = t.center[2] + su * t.length / 2 * t.axis_u[2] + sv * t.length_v / 2 * t.axis_v[2];
      return p;
    };
    Vec3 a = corner(-1, -1), b = corner(1, -1), c = corner(1, 1), d = corner(-1, 1);
    surface.push_back({a, b, c});
    surface.push_back({a, c, d});
  }
}

Vec3 read_vec3(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

void read_surface_item(Reader& r, const Domain2D& d, std::vector<Triangle3>& out) {
  std::string type = r.string("type", "triangles", {"triangles", "plane", "cylinder", "patch"});
  if (type == "triangles") {
    const Json* tri = r.raw("triangles");
    bool ok = tri && tri->is_array();
    if (ok) {
      try {
        for (const auto& t : *tri) out.push_back({read_vec3(t.at(0)), read_vec3(t.at(1)), read_vec3(t.at(2))});
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) r.fail("triangles", "expected [[[x1,x2,x3] x 3], ...]");
    else r.out("triangles") = *tri;
  } else if (type == "plane") {
    double x1 = r.number("x1", 0.5);
    int segments = r.integer("segments", 4096);
    if (segments < 8) r.fail("segments", "at least 8 are required");
    else {
      auto p = plane_surface(d, x1, segments);
      out.insert(out.end(), p.begin(), p.end());
    }
  } else if (type == "cylinder") {
    double lo = r.number("x_lo", 0.0), hi = r.number("x_hi", 1.0);
    Point3 c = r.point("center", {0, 0, 0}, 2);
    double rad = r.number("radius", 0.5);
    int segments = r.integer("segments", 256);
    bool caps = r.boolean("caps", true);
    if (!(rad > 0)) r.fail("radius", "must be positive");
    else if (!(hi >= lo)) r.fail("x_hi", "must be at least x_lo");
    else if (segments < 8) r.fail("segments", "at least 8 are required");
    else {
      auto s = cylinder_surface(lo, hi, {c[0], c[1]}, rad, segments, caps);
      out.insert(out.end(), s.begin(), s.end());
    }
  } else {
    Term t;
    t.kind = Term::Kind::kCrack3D;
    t.center = r.point("center", {0.5, 0.5, 0.5});
    t.axis_u = r.point("axis_u", {0, 1, 0});
    t.axis_v = r.point("axis_v", {0, 0, 1});
    t.length = r.number("length_u", 0.1);
    t.length_v = r.number("length_v", 0.1);
    std::vector<JumpCurve> unused;
    append_crack_geometry(t, unused, out);
  }
  r.finish();
}

void read_params(Reader& r, Params& p) {
  p.p = r.number("p", 2.0);
  if (!(p.p >= 1)) r.fail("p", "must be at least 1");
  p.T = r.number("T", 1.0);
  if (!(p.T > 0)) r.fail("T", "must be positive");
  p.T_sweep = r.numbers("T_sweep", {});
  for (double t : p.T_sweep)
    if (!(t > 0)) r.fail("T_sweep", "entries must be positive");
  p.eps = r.numbers("eps", {0.1, 0.05, 0.025, 0.0125});
  if (p.eps.empty()) r.fail("eps", "at least one value is required");
  for (double e : p.eps)
    if (!(e > 0)) r.fail("eps", "entries must be positive");
  p.delta = r.number("delta", 0.25);
  if (!(p.delta > 0 && p.delta <= 1)) r.fail("delta", "must lie in (0, 1]");
  p.lambda = r.number("lambda", 2.0);
  if (!(p.lambda > 1)) r.fail("lambda", "must exceed 1");
  p.cover_radius = r.number("cover_radius", 0.0);
  if (!(p.cover_radius >= 0)) r.fail("cover_radius", "must be nonnegative");
  p.n_times = r.integer("n_times", 64);
  if (p.n_times < 1 || p.n_times > 100000) r.fail("n_times", "must lie in [1, 100000]");
  p.samples_per_circle = r.integer("samples_per_circle", 128);
  if (p.samples_per_circle < 8) r.fail("samples_per_circle", "must be at least 8");
  p.seed = r.unsigned64("seed", 1);
  p.slack = r.number("slack", 0.02);
  if (!(p.slack >= 0 && p.slack < 1)) r.fail("slack", "must lie in [0, 1)");
  p.slices = r.integer("slices", 64);
  if (p.slices < 2 || p.slices > 100000) r.fail("slices", "must lie in [2, 100000]");
  p.eta = r.number("eta", 0.0);
  if (!(p.eta >= 0)) r.fail("eta", "must be nonnegative");
  p.enforce_guard = r.boolean("enforce_guard", true);
  p.tolerance = r.number("tolerance", 0.05);
  if (!(p.tolerance > 0)) r.fail("tolerance", "must be positive");
  r.finish();
}

// Deep merge: objects merge key by key, everything else is replaced.
void merge_into(Json& base, const Json& over) {
  if (!base.is_object() || !over.is_object()) {
    base = over;
    return;
  }
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (base.contains(it.key())) merge_into(base[it.key()], it.value());
    else base[it.key()] = it.value();
  }
}

double preset_number(const Json& p, const char* key, double def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_number())
    throw ValidationError(std::vector<FieldError>{{std::string("preset.") + key, "expected a number"}});
  return p[key].get<double>();
}

uint64_t preset_seed(const Json& p) {
  if (!p.contains("seed")) return 1;
  if (!p["seed"].is_number_integer() || p["seed"].get<int64_t>() < 0)
    throw ValidationError(std::vector<FieldError>{{"preset.seed", "expected a nonnegative integer"}});
  return p["seed"].get<uint64_t>();
}

void check_preset_keys(const Json& p, const std::vector<std::string>& allowed) {
  std::vector<FieldError> errs;
  for (auto it = p.begin(); it != p.end(); ++it)
    if (it.key() != "name" && std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      errs.push_back({"preset." + it.key(), "unknown field"});
  if (!errs.empty()) throw ValidationError(errs);
}

double uniform(std::mt19937_64& g, double lo, double hi) {
  // 53 random bits; identical on every standard library.
  double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

// ---------------------------------------------------------------- evaluation

double Term::operator()(const Point3& x) const {
  switch (kind) {
    case Kind::kConstant:
      return amplitude;
    case Kind::kLinear:
      return coef[0] + coef[1] * x[0] + coef[2] * x[1] + coef[3] * x[2];
    case Kind::kSin:
      return amplitude * std::sin(dot3(wave, x) + phase);
    case Kind::kBump: {
      Point3 y = sub3(x, center);
      return amplitude * bump(std::sqrt(dot3(y, y)) / width);
    }
    case Kind::kCrack: {
      double yx = x[0] - center[0], yy = x[1] - center[1];
      double c = std::cos(angle), s = std::sin(angle);
      double along = c * yx + s * yy, across = -s * yx + c * yy;
      return across > 0 ? amplitude * bump(along / (length / 2)) * bump(across / width) : 0.0;
    }
    case Kind::kCrack3D: {
      Point3 y = sub3(x, center);
      Point3 n = cross3(axis_u, axis_v);
      double su = dot3(axis_u, y), sv = dot3(axis_v, y), sn = dot3(n, y);
      return sn > 0 ? amplitude * bump(su / (length / 2)) * bump(sv / (length_v / 2)) *
                          bump(sn / width)
                    : 0.0;
    }
  }
  return 0.0;
}

bool RegionPiece::contains(const Point3& x, int dim) const {
  switch (shape) {
    case Shape::kHalfspace:
      return dot3(normal, x) > offset;
    case Shape::kBall: {
      Point3 y = sub3(x, center);
      return dot3(y, y) < radius * radius;
    }
    case Shape::kCylinder: {
      double d2 = (x[1] - center[1]) * (x[1] - center[1]) + (x[2] - center[2]) * (x[2] - center[2]);
      return x[0] > lo[0] && x[0] < hi[0] && d2 < radius * radius;
    }
    case Shape::kBox:
      for (int k = 0; k < dim; ++k)
        if (!(x[static_cast<size_t>(k)] > lo[static_cast<size_t>(k)] &&
              x[static_cast<size_t>(k)] < hi[static_cast<size_t>(k)]))
          return false;
      return true;
  }
  return false;
}

double FunctionSpec::value(const Point3& x, int dim, double eps) const {
  double v = 0;
  if (!regions.empty()) {
    v = default_value;
    for (const auto& r : regions)
      if (r.contains(x, dim)) {
        v = r.value;
        break;
      }
  }
  for (const auto& t : terms) v += (t.eps_power != 0 ? std::pow(eps, t.eps_power) : 1.0) * t(x);
  return v;
}

PiecewiseFunction2D Scenario::function_2d() const {
  if (dim != 2) throw InvalidArgument("scenario: a planar function needs a scenario without interval");
  if (!function.grid.empty()) {
    Domain2D d = domain;
    return PiecewiseFunction2D(d, params.p, function.grid, curves);
  }
  return PiecewiseFunction2D::sample(
      domain, params.p, [&](Vec2 q) { return function.value({q.x, q.y, 0.0}, 2); }, curves);
}

Function3D Scenario::function_3d(double eps) const {
  if (counterexample_h && sweep) {
    CounterexampleOptions o = sweep->options;
    return counterexample_family(sweep->kind, *counterexample_h, o);
  }
  if (dim != 3) throw InvalidArgument("scenario: a function on I x S needs an interval");
  return Function3D::sample(
      domain, a, b, params.slices, params.p,
      [&](double x1, Vec2 q) { return function.value({x1, q.x, q.y}, 3, eps); }, surface);
}

std::vector<Ball> Scenario::ball_family() const {
  if (!balls.empty() || !random_balls) return balls;
  auto g = seeded_rng(params.seed, 1);
  std::vector<Ball> out;
  for (int k = 0; k < random_balls->count; ++k) {
    Ball b;
    b.center = {uniform(g, random_balls->lo.x, random_balls->hi.x),
                uniform(g, random_balls->lo.y, random_balls->hi.y)};
    b.radius = uniform(g, random_balls->r_min, random_balls->r_max);
    b.id = k;
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- presets

std::vector<std::string> preset_names() {
  return {"crack", "crack3d", "counterexample-a", "counterexample-b", "ms-step", "ms-ripple",
          "ms-step-disk", "ms-disk-jump", "balls-random"};
}

Json expand_preset(const Json& preset) {
  Json p = preset.is_string() ? Json{{"name", preset}} : preset;
  if (!p.is_object() || !p.contains("name") || !p["name"].is_string())
    throw ValidationError(std::vector<FieldError>{{"preset", "expected a name or {\"name\": ...}"}});
  const std::string name = p["name"].get<std::string>();
  Json s;
  s["name"] = name;
  if (name == "crack") {
    check_preset_keys(p, {"seed", "length", "size"});
    const uint64_t seed = preset_seed(p);
    const double size = preset_number(p, "size", 1.0);
    double length = preset_number(p, "length", 0.002);
    auto g = seeded_rng(seed, 7);
    // Central cracks with a margin that leaves their mirror images outside S'.
    double cx = uniform(g, 0.4, 0.6) * size, cy = uniform(g, 0.4, 0.6) * size;
    double angle = uniform(g, 0.0, kPi);
    length *= uniform(g, 0.6, 1.0);
    s["domain"] = {{"shape", "rectangle"}, {"lo", {0, 0}}, {"hi", {size, size}},
                   {"margin", 0.35 * size}, {"grid", size / 1000}};
    s["function"]["terms"] = Json::array(
        {{{"type", "linear"}, {"coef", {0.0, 0.5, 0.25}}},
         {{"type", "crack"}, {"center", {cx, cy}}, {"angle", angle}, {"length", length},
          {"width", 10 * length}, {"amplitude", 1.0}}});
    s["params"] = {{"seed", seed}, {"cover_radius", length / 3.9}};
  } else if (name == "crack3d") {
    check_preset_keys(p, {"seed", "length"});
    const uint64_t seed = preset_seed(p);
    double length = preset_number(p, "length", 0.06);
    auto g = seeded_rng(seed, 11);
    Point3 c{uniform(g, 0.35, 0.65), uniform(g, 0.35, 0.65), uniform(g, 0.35, 0.65)};
    // Tilt the patch away from the plane x1 = const by a random angle.
    double tilt = uniform(g, 0.3, 1.2), turn = uniform(g, 0.0, 2 * kPi);
    Point3 u{std::cos(tilt), std::sin(tilt) * std::cos(turn), std::sin(tilt) * std::sin(turn)};
    Point3 v{0.0, -std::sin(turn), std::cos(turn)};
    double lu = length * uniform(g, 0.7, 1.0), lv = length * uniform(g, 0.7, 1.0);
    s["domain"] = {{"shape", "rectangle"}, {"lo", {0, 0}}, {"hi", {1, 1}}, {"margin", 0.25},
                   {"grid", 0.0125}};
    s["interval"] = {0.0, 1.0};
    s["function"]["terms"] = Json::array(
        {{{"type", "linear"}, {"coef", {0.0, 0.2, 0.5, 0.25}}},
         {{"type", "crack3d"}, {"center", c}, {"axis_u", u}, {"axis_v", v}, {"length_u", lu},
          {"length_v", lv}, {"width", 0.1}, {"amplitude", 1.0}}});
    s["params"] = {{"seed", seed}, {"slices", 32}, {"T", 1.0}};
  } else if (name == "counterexample-a" || name == "counterexample-b") {
    check_preset_keys(p, {"h"});
    const bool a = name == "counterexample-a";
    Json ce = {{"kind", a ? "a" : "b"}};
    if (p.contains("h")) ce["h"] = p["h"];
    ce["cover_factor"] = a ? 0.25 : 0.3;
    s["counterexample"] = ce;
    s["interval"] = {-1.0, 1.0};
    s["domain"] = {{"shape", "disk"}, {"center", {0, 0}}, {"radius", 1.0},
                   {"margin", a ? 1.0 : 6.0}, {"grid", a ? 0.1 : 0.05}, {"extension", "given"}};
    s["params"] = a ? Json{{"slices", 256}, {"T", 1.0}, {"enforce_guard", false}}
                    : Json{{"slices", 32}, {"T", 0.1}, {"eta", 6.0}, {"enforce_guard", false}};
  } else if (name == "ms-step" || name == "ms-ripple") {
    check_preset_keys(p, {"amplitude"});
    s["domain"] = {{"shape", "rectangle"}, {"lo", {0, 0}}, {"hi", {1, 1}}, {"margin", 0.1},
                   {"grid", 0.02}, {"extension", "given"}};
    s["interval"] = {0.0, 1.0};
    s["function"]["regions"] = Json::array(
        {{{"type", "halfspace"}, {"normal", {1, 0, 0}}, {"offset", 0.5}, {"value", 1.0}}});
    s["jumps"]["surfaces"] = Json::array({{{"type", "plane"}, {"x1", 0.5}}});
    if (name == "ms-ripple")
      s["function"]["terms"] = Json::array(
          {{{"type", "sin"}, {"amplitude", preset_number(p, "amplitude", 0.5)},
            {"wave", {0.0, 2 * kPi, 0.0}}, {"eps_power", 0.5}}});
    s["params"] = {{"slices", 40}, {"eps", {0.1, 0.05, 0.025, 0.0125}}};
  } else if (name == "ms-step-disk") {
    check_preset_keys(p, {});
    s["domain"] = {{"shape", "disk"}, {"center", {0, 0}}, {"radius", 1.0}, {"margin", 0.2},
                   {"grid", 0.05}, {"extension", "given"}};
    s["interval"] = {0.0, 1.0};
    s["function"]["regions"] = Json::array(
        {{{"type", "halfspace"}, {"normal", {1, 0, 0}}, {"offset", 0.5}, {"value", 1.0}}});
    s["jumps"]["surfaces"] = Json::array({{{"type", "plane"}, {"x1", 0.5}}});
    s["params"] = {{"slices", 64}, {"eps", {1.0, 0.1, 0.01}}};
  } else if (name == "ms-disk-jump") {
    check_preset_keys(p, {});
    // Radius 0.52 keeps lattice nodes off the circle.
    s["domain"] = {{"shape", "disk"}, {"center", {0, 0}}, {"radius", 1.0}, {"margin", 0.2},
                   {"grid", 0.05}, {"extension", "given"}};
    s["interval"] = {0.0, 1.0};
    s["function"]["regions"] = Json::array(
        {{{"type", "cylinder"}, {"x_lo", 0.0}, {"x_hi", 1.0}, {"center", {0, 0}},
          {"radius", 0.52}, {"value", 1.0}}});
    s["jumps"]["surfaces"] = Json::array({{{"type", "cylinder"}, {"x_lo", 0.0}, {"x_hi", 1.0},
                                           {"center", {0, 0}}, {"radius", 0.52},
                                           {"caps", false}}});
    s["params"] = {{"slices", 32}, {"eps", {0.1, 0.05, 0.025, 0.0125}}};
  } else if (name == "balls-random") {
    check_preset_keys(p, {"seed", "count"});
    const uint64_t seed = preset_seed(p);
    int count = static_cast<int>(preset_number(p, "count", 20));
    s["random_balls"] = {{"count", count}, {"lo", {0, 0}}, {"hi", {1, 1}}, {"r_min", 0.005},
                         {"r_max", 0.04}};
    s["params"] = {{"seed", seed}, {"T", 2.0}};
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError(std::vector<FieldError>{{"preset.name", "unknown preset; known: " + list}});
  }
  return s;
}

// ---------------------------------------------------------------- parsing

Scenario parse_scenario(const Json& input) {
  std::vector<FieldError> errors;
  if (!input.is_object()) throw ValidationError(std::vector<FieldError>{{"<root>", "expected an object"}});
  Json merged = input;
  if (input.contains("preset")) {
    merged = expand_preset(input["preset"]);
    Json user = input;
    user.erase("preset");
    merge_into(merged, user);
  }

  Scenario s;
  Json out;
  Reader root(merged, "", errors, out);
  s.name = root.string("name", "unnamed");

  // Interval first: it fixes the dimension used by terms and regions.
  if (const Json* iv = root.raw("interval")) {
    if (!iv->is_array() || iv->size() != 2 || !(*iv)[0].is_number() || !(*iv)[1].is_number()) {
      errors.push_back({"interval", "expected [a, b]"});
    } else {
      s.dim = 3;
      s.a = (*iv)[0].get<double>();
      s.b = (*iv)[1].get<double>();
      if (!(s.b > s.a)) errors.push_back({"interval", "upper end must exceed lower end"});
      root.out("interval") = *iv;
    }
  }

  static const Json empty = Json::object();
  {
    const Json* d = root.raw("domain");
    Reader r(d ? *d : empty, "domain", errors, root.out("domain"));
    s.domain = read_domain(r);
  }

  {
    const Json* f = root.raw("function");
    Reader r(f ? *f : empty, "function", errors, root.out("function"));
    if (const Json* terms = r.raw("terms")) {
      if (!terms->is_array()) r.fail("terms", "expected an array");
      else
        for (size_t k = 0; k < terms->size(); ++k) {
          Json o;
          Reader tr((*terms)[k], "function.terms[" + std::to_string(k) + "]", errors, o);
          s.function.terms.push_back(read_term(tr, s.dim));
          r.out("terms").push_back(o);
        }
    }
    if (const Json* regs = r.raw("regions")) {
      if (!regs->is_array()) r.fail("regions", "expected an array");
      else
        for (size_t k = 0; k < regs->size(); ++k) {
          Json o;
          Reader rr((*regs)[k], "function.regions[" + std::to_string(k) + "]", errors, o);
          s.function.regions.push_back(read_region(rr, s.dim));
          r.out("regions").push_back(o);
        }
    }
    s.function.default_value = r.number("default", 0.0);
    s.function.grid = r.numbers("grid", {});
    if (!s.function.grid.empty()) {
      if (s.dim != 2) r.fail("grid", "value grids are supported for planar scenarios only");
      else if (s.domain.h > 0 && s.domain.margin > 0 &&
               s.function.grid.size() != s.domain.grid().size())
        r.fail("grid", "expected " + std::to_string(s.domain.grid().size()) +
                           " node values on the extended lattice");
    }
    r.finish();
  }

  {
    const Json* j = root.raw("jumps");
    Reader r(j ? *j : empty, "jumps", errors, root.out("jumps"));
    if (const Json* curves = r.raw("curves")) {
      bool ok = curves->is_array();
      if (ok) {
        try {
          for (const auto& c : *curves) {
            JumpCurve jc;
            for (const auto& pt : c) jc.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            if (jc.points.size() < 2) ok = false;
            s.curves.push_back(jc);
          }
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok) r.fail("curves", "expected [[[x, y], [x, y], ...], ...] with two or more points each");
      else r.out("curves") = *curves;
      if (ok && s.dim == 3) r.fail("curves", "use surfaces for scenarios with an interval");
    }
    if (const Json* surf = r.raw("surfaces")) {
      if (!surf->is_array()) r.fail("surfaces", "expected an array");
      else if (s.dim != 3) r.fail("surfaces", "surfaces need an interval");
      else
        for (size_t k = 0; k < surf->size(); ++k) {
          Json o;
          Reader sr((*surf)[k], "jumps.surfaces[" + std::to_string(k) + "]", errors, o);
          try {
            read_surface_item(sr, s.domain, s.surface);
          } catch (const Error& e) {
            sr.fail("", e.what());
          }
          r.out("surfaces").push_back(o);
        }
    }
    r.finish();
  }
  for (const auto& t : s.function.terms) append_crack_geometry(t, s.curves, s.surface);

  if (const Json* b = root.raw("balls")) {
    if (!b->is_array()) {
      errors.push_back({"balls", "expected an array"});
    } else {
      for (size_t k = 0; k < b->size(); ++k) {
        Json o;
        Reader br((*b)[k], "balls[" + std::to_string(k) + "]", errors, o);
        Ball ball;
        ball.id = br.integer("id", static_cast<int>(k));
        ball.center = {br.number("cx", 0.0), br.number("cy", 0.0)};
        ball.radius = br.number("r", 0.0);
        if (!(ball.radius >= 0)) br.fail("r", "must be nonnegative");
        br.finish();
        s.balls.push_back(ball);
        root.out("balls").push_back(o);
      }
    }
  }
  if (const Json* rb = root.raw("random_balls")) {
    Reader r(*rb, "random_balls", errors, root.out("random_balls"));
    RandomBalls x;
    x.count = r.integer("count", 10);
    if (x.count < 0 || x.count > 100000) r.fail("count", "must lie in [0, 100000]");
    Point3 lo = r.point("lo", {0, 0, 0}, 2), hi = r.point("hi", {1, 1, 0}, 2);
    x.lo = {lo[0], lo[1]};
    x.hi = {hi[0], hi[1]};
    if (!(x.hi.x > x.lo.x && x.hi.y > x.lo.y)) r.fail("hi", "must exceed lo");
    x.r_min = r.number("r_min", 0.01);
    x.r_max = r.number("r_max", 0.1);
    if (!(x.r_min > 0 && x.r_max >= x.r_min)) r.fail("r_max", "need 0 < r_min <= r_max");
    r.finish();
    s.random_balls = x;
  }
  if (const Json* ce = root.raw("counterexample")) {
    Reader r(*ce, "counterexample", errors, root.out("counterexample"));
    SweepSpec sw;
    std::string kind = r.string("kind", "a", {"a", "b"});
    sw.kind = kind == "b" ? CounterexampleKind::kB : CounterexampleKind::kA;
    if (r.has("h")) {
      double h = r.number("h", 0.1);
      if (!(h > 0 && h < 0.5)) r.fail("h", "must lie in (0, 1/2)");
      s.counterexample_h = h;
    }
    sw.h = r.numbers("h_values", {0.05, 0.1, 0.2, 0.4});
    if (sw.h.size() < 2) r.fail("h_values", "at least two values are required for a fit");
    for (double h : sw.h)
      if (!(h > 0 && h < 0.5)) r.fail("h_values", "entries must lie in (0, 1/2)");
    sw.options.segments = r.integer("segments", 256);
    if (sw.options.segments < 8) r.fail("segments", "at least 8 are required");
    sw.cover_factor = r.number("cover_factor", 0.25);
    if (!(sw.cover_factor > 0)) r.fail("cover_factor", "must be positive");
    r.finish();
    if (s.domain.shape != DomainShape::kDisk || s.domain.radius != 1.0 ||
        s.domain.center != Vec2{0, 0} || s.domain.extension != ExtensionMode::kGiven)
      errors.push_back({"domain", "counterexamples live on S = B(0, 1) with extension \"given\""});
    if (s.dim != 3 || s.a != -1.0 || s.b != 1.0)
      errors.push_back({"interval", "counterexamples live on I = (-1, 1)"});
    sw.options.margin = s.domain.margin;
    sw.options.grid = s.domain.h;
    s.sweep = sw;
  }
  {
    const Json* p = root.raw("params");
    Reader r(p ? *p : empty, "params", errors, root.out("params"));
    read_params(r, s.params);
  }
  root.finish();
  if (s.sweep) {
    s.sweep->options.slices = s.params.slices;
    s.sweep->options.p = s.params.p;
  }
  for (const auto& t : s.function.terms)
    if (t.eps_power != 0) s.eps_family = true;

  if (!errors.empty()) throw ValidationError(errors);
  s.canonical = out;
  s.hash = fnv1a64(out.dump());
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::vector<FieldError>{{"<file>", std::string("parse error: ") + e.what()}});
  }
  return parse_scenario(j);
}

Scenario with_overrides(const Scenario& s, const Json& overrides) {
  Json j = s.canonical;
  std::vector<FieldError> errors;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    const std::string& k = it.key();
    if (k == "grid") j["domain"]["grid"] = it.value();
    else if (k == "p" || k == "T" || k == "eps" || k == "delta" || k == "slices" || k == "seed" ||
             k == "slack" || k == "lambda" || k == "cover_radius" || k == "n_times" || k == "eta" ||
             k == "T_sweep" || k == "tolerance" || k == "enforce_guard")
      j["params"][k] = it.value();
    else errors.push_back({"overrides." + k, "unknown override"});
  }
  if (!errors.empty()) throw ValidationError(errors);
  return parse_scenario(j);
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::mt19937_64 seeded_rng(uint64_t seed, uint64_t stream) {
  return std::mt19937_64(seed + stream * 0x9E3779B97F4A7C15ULL);
}

}  // namespace sbv
