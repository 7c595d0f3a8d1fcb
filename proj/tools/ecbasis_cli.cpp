// Command-line front end. Talks to the kernel only through the C interface.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecbasis/ecbasis.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ecb_status s) {
  if (s != ECB_OK) throw Failure(ecb_last_error());
}

[[noreturn]] void config_error(const std::string& what) { throw Failure("ConfigParse: " + what); }

struct SpaceDeleter {
  void operator()(ecb_space* p) const { ecb_space_free(p); }
};
struct CurveDeleter {
  void operator()(ecb_curve* p) const { ecb_curve_free(p); }
};
struct SurfaceDeleter {
  void operator()(ecb_surface* p) const { ecb_surface_free(p); }
};
struct MeshDeleter {
  void operator()(ecb_mesh* p) const { ecb_mesh_free(p); }
};
using Space = std::unique_ptr<ecb_space, SpaceDeleter>;
using Curve = std::unique_ptr<ecb_curve, CurveDeleter>;
using Surface = std::unique_ptr<ecb_surface, SurfaceDeleter>;
using Mesh = std::unique_ptr<ecb_mesh, MeshDeleter>;

struct Options {
  std::string command;
  std::string config;
  std::string out = "out";
  int samples = 501;
  std::string grid = "50x100";
  int dmax = 0;
  bool check_conditioning = false;
  int expected_digits = 0;
  int trials = 10;
  double significance = 0.05;
  unsigned workers = 0;

  ecb_build_options build() const { return {check_conditioning ? 1 : 0, expected_digits}; }
};

// Numbers in configs may be written as arithmetic over pi, e.g. "49*pi/8".
class Expression {
 public:
  explicit Expression(std::string text) : s_(std::move(text)) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
    return false;
  }
  [[noreturn]] void fail() const { config_error("cannot read number '" + s_ + "'"); }

  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.compare(pos_, 2, "pi") == 0) return pos_ += 2, 3.141592653589793238462643383279502884;
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail();
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

double number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return Expression(j.get<std::string>()).parse();
  config_error("expected a number, got " + j.dump());
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) config_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<ecb_zero> zeros_of(const json& j) {
  if (!j.is_array()) config_error("zeros must be an array");
  std::vector<ecb_zero> out;
  for (const auto& z : j) {
    if (z.is_array() && z.size() == 3)
      out.push_back({number(z[0]), number(z[1]), static_cast<int>(number(z[2]))});
    else if (z.is_object())
      out.push_back({number(field(z, "re")), z.contains("im") ? number(z["im"]) : 0.0,
                     z.contains("multiplicity") ? static_cast<int>(number(z["multiplicity"])) : 1});
    else
      config_error("zero entries are [re, im, multiplicity] or {re, im, multiplicity}");
  }
  return out;
}

Space make_space(const json& spec, const Options& o) {
  const auto zeros = zeros_of(field(spec, "zeros"));
  const auto& iv = field(spec, "interval");
  if (!iv.is_array() || iv.size() != 2) config_error("interval must be [alpha, beta]");
  const auto options = o.build();
  ecb_space* s = nullptr;
  check(ecb_space_create(zeros.data(), zeros.size(), number(iv[0]), number(iv[1]), &options, &s));
  return Space(s);
}

std::pair<double, double> interval(const ecb_space* s) {
  double a = 0, b = 0;
  check(ecb_space_interval(s, &a, &b));
  return {a, b};
}

std::string ordinary_name(const ecb_space* s, int k) {
  std::size_t needed = 0;
  check(ecb_space_ordinary_name(s, k, nullptr, 0, &needed));
  std::string name(needed, '\0');
  check(ecb_space_ordinary_name(s, k, name.data(), needed, nullptr));
  name.resize(needed - 1);
  return name;
}

// Coefficients in the ordinary basis: either a plain array in basis order or
// a list of {"function": {power, rate, frequency, phase}, "weight"} terms.
std::vector<double> coefficients(const json& j, const ecb_space* s) {
  const int dim = ecb_space_dimension(s);
  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  if (!j.is_array()) config_error("coefficients must be an array");
  if (!j.empty() && !j[0].is_object()) {
    if (static_cast<int>(j.size()) != dim)
      config_error("coefficient array has " + std::to_string(j.size()) + " entries, space has dimension " +
                   std::to_string(dim));
    for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] = number(j[static_cast<std::size_t>(k)]);
    return out;
  }
  for (const auto& term : j) {
    const auto& f = field(term, "function");
    const int power = f.contains("power") ? static_cast<int>(number(f["power"])) : 0;
    const double rate = f.contains("rate") ? number(f["rate"]) : 0.0;
    const double freq = f.contains("frequency") ? number(f["frequency"]) : 0.0;
    const int phase = f.value("phase", std::string("cos")) == "sin" ? 1 : 0;
    bool found = false;
    for (int k = 0; k < dim && !found; ++k) {
      ecb_ordinary_function g{};
      check(ecb_space_ordinary_function(s, k, &g));
      const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
      if (g.power == power && close(g.rate, rate) && close(g.frequency, std::abs(freq)) && (freq == 0 || g.phase == phase)) {
        out[static_cast<std::size_t>(k)] += number(field(term, "weight"));
        found = true;
      }
    }
    if (!found) config_error("function " + f.dump() + " is not in the space");
  }
  return out;
}

std::pair<int, int> parse_grid(const std::string& g) {
  int m0 = 0, m1 = 0;
  char x = 0;
  std::istringstream in(g);
  if (!(in >> m0 >> x >> m1) || (x != 'x' && x != 'X') || m0 < 2 || m1 < 2)
    throw Failure("InvalidArgument: --grid expects M0xM1 with both at least 2");
  return {m0, m1};
}

std::vector<double> uniform(double a, double b, int m) {
  std::vector<double> u(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) u[static_cast<std::size_t>(i)] = i == m - 1 ? b : a + (b - a) * i / (m - 1);
  return u;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<double>& rows) {
  std::vector<const char*> names;
  for (const auto& h : header) names.push_back(h.c_str());
  check(ecb_write_csv(path.c_str(), names.data(), names.size(), rows.data(), rows.size() / header.size()));
}

struct Line {
  std::string label;
  std::vector<double> x, y;
};

void write_svg(const fs::path& path, const std::string& title, const std::vector<Line>& lines) {
  std::vector<std::size_t> lengths;
  std::vector<double> xs, ys;
  std::vector<const char*> labels;
  for (const auto& l : lines) {
    lengths.push_back(l.x.size());
    xs.insert(xs.end(), l.x.begin(), l.x.end());
    ys.insert(ys.end(), l.y.begin(), l.y.end());
    labels.push_back(l.label.c_str());
  }
  check(ecb_write_svg(path.c_str(), title.c_str(), lines.size(), lengths.data(), xs.data(), ys.data(), labels.data()));
}

json reports_of(const ecb_space* s) {
  json out = json::array();
  for (std::size_t i = 0; i < ecb_space_report_count(s); ++i) {
    ecb_condition_report r{};
    check(ecb_space_report(s, i, &r));
    out.push_back({{"stage", r.stage}, {"condition_number", r.condition_number}, {"estimated_digits", r.estimated_digits}});
  }
  return out;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw Failure("IoFailure: cannot write " + path.string());
}

int run_space(const json& cfg, const Options& o) {
  auto space = make_space(field(cfg, "space"), o);
  const int dim = ecb_space_dimension(space.get());
  const auto [a, b] = interval(space.get());
  const auto us = uniform(a, b, o.samples);

  std::vector<std::string> names;
  for (int k = 0; k < dim; ++k) names.push_back(ordinary_name(space.get(), k));
  std::vector<std::string> header{"u"};
  for (const auto& n : names) header.push_back("phi:" + n);
  for (int i = 0; i < dim; ++i) header.push_back("b" + std::to_string(i));

  for (int j = 0; j <= o.dmax; ++j) {
    std::vector<double> rows;
    std::vector<Line> ord(static_cast<std::size_t>(dim)), bb(static_cast<std::size_t>(dim));
    std::vector<double> phi(static_cast<std::size_t>(dim)), bv(static_cast<std::size_t>(dim));
    for (double u : us) {
      check(ecb_space_eval_ordinary(space.get(), j, u, phi.data()));
      check(ecb_space_eval_basis(space.get(), j, u, bv.data()));
      rows.push_back(u);
      rows.insert(rows.end(), phi.begin(), phi.end());
      rows.insert(rows.end(), bv.begin(), bv.end());
      for (std::size_t k = 0; k < phi.size(); ++k) {
        ord[k].x.push_back(u), ord[k].y.push_back(phi[k]);
        bb[k].x.push_back(u), bb[k].y.push_back(bv[k]);
      }
    }
    for (int k = 0; k < dim; ++k) {
      ord[static_cast<std::size_t>(k)].label = names[static_cast<std::size_t>(k)];
      bb[static_cast<std::size_t>(k)].label = "b" + std::to_string(k);
    }
    const std::string suffix = j == 0 ? "" : "_d" + std::to_string(j);
    write_csv(fs::path(o.out) / ("basis" + suffix + ".csv"), header, rows);
    write_svg(fs::path(o.out) / ("ordinary" + suffix + ".svg"), "ordinary basis" + suffix, ord);
    write_svg(fs::path(o.out) / ("bbasis" + suffix + ".svg"), "normalized B-basis" + suffix, bb);
  }

  json report{{"dimension", dim},
              {"interval", {a, b}},
              {"reflection_invariant", ecb_space_reflection_invariant(space.get()) != 0},
              {"ordinary_basis", names},
              {"conditioning", reports_of(space.get())}};
  write_json(fs::path(o.out) / "space.json", report);
  std::cout << "dimension " << dim << " on [" << a << ", " << b << "]\n";
  for (const auto& r : report["conditioning"])
    std::cout << "  " << r["stage"].get<std::string>() << ": condition " << r["condition_number"].get<double>()
              << ", ~" << r["estimated_digits"].get<int>() << " digits\n";
  return 0;
}

Curve curve_from_config(const json& cfg, const ecb_space* space) {
  const int dim = ecb_space_dimension(space);
  ecb_curve* c = nullptr;
  if (cfg.contains("control_points")) {
    const auto& pts = cfg["control_points"];
    if (!pts.is_array() || static_cast<int>(pts.size()) != dim || pts.empty() || !pts[0].is_array())
      config_error("control_points must hold one point per basis function");
    const std::size_t delta = pts[0].size();
    std::vector<double> flat;
    for (const auto& p : pts) {
      if (p.size() != delta) config_error("control points differ in dimension");
      for (const auto& v : p) flat.push_back(number(v));
    }
    check(ecb_curve_create(space, flat.data(), delta, &c));
  } else if (cfg.contains("ordinary")) {
    // One coefficient list per coordinate.
    const auto& coords = cfg["ordinary"];
    if (!coords.is_array() || coords.empty()) config_error("ordinary must list coefficients per coordinate");
    const std::size_t delta = coords.size();
    std::vector<double> flat(static_cast<std::size_t>(dim) * delta);
    for (std::size_t l = 0; l < delta; ++l) {
      const auto lam = coefficients(coords[l], space);
      for (std::size_t k = 0; k < lam.size(); ++k) flat[k * delta + l] = lam[k];
    }
    check(ecb_curve_from_ordinary(space, flat.data(), delta, &c));
  } else {
    config_error("curve needs control_points or ordinary");
  }
  return Curve(c);
}

void emit_curve(const std::string& name, const ecb_curve* c, const Options& o, std::vector<Line>& plot) {
  ecb_space* raw = nullptr;
  check(ecb_curve_space(c, &raw));
  Space space(raw);
  const auto [a, b] = interval(space.get());
  const std::size_t n = ecb_curve_point_count(c), delta = ecb_curve_point_dimension(c);

  std::vector<double> control(n * delta);
  check(ecb_curve_control_points(c, control.data()));
  std::vector<std::string> header;
  for (std::size_t l = 0; l < delta; ++l) header.push_back("x" + std::to_string(l));
  write_csv(fs::path(o.out) / (name + "_control.csv"), header, control);

  header.assign({"u"});
  for (int j = 0; j <= o.dmax; ++j)
    for (std::size_t l = 0; l < delta; ++l)
      header.push_back(j == 0 ? "x" + std::to_string(l) : "d" + std::to_string(j) + "x" + std::to_string(l));
  std::vector<double> rows, point(delta);
  Line line{name, {}, {}};
  for (double u : uniform(a, b, o.samples)) {
    rows.push_back(u);
    for (int j = 0; j <= o.dmax; ++j) {
      check(ecb_curve_eval(c, j, u, point.data()));
      rows.insert(rows.end(), point.begin(), point.end());
      if (j == 0) {
        line.x.push_back(delta >= 2 ? point[0] : u);
        line.y.push_back(delta >= 2 ? point[1] : point[0]);
      }
    }
  }
  write_csv(fs::path(o.out) / (name + "_samples.csv"), header, rows);
  plot.push_back(std::move(line));
  Line polygon{name + " control polygon", {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    polygon.x.push_back(delta >= 2 ? control[i * delta] : 0.0);
    polygon.y.push_back(delta >= 2 ? control[i * delta + 1] : control[i * delta]);
  }
  if (delta >= 2) plot.push_back(std::move(polygon));
}

int run_curve(const json& cfg, const Options& o) {
  auto space = make_space(field(cfg, "space"), o);
  auto curve = curve_from_config(cfg, space.get());
  std::vector<Line> plot;
  emit_curve("curve", curve.get(), o, plot);
  if (cfg.contains("elevate")) {
    auto target = make_space(cfg["elevate"], o);
    ecb_curve* e = nullptr;
    check(ecb_curve_elevate(curve.get(), target.get(), &e));
    Curve elevated(e);
    emit_curve("elevated", elevated.get(), o, plot);
  }
  if (cfg.contains("subdivide")) {
    const auto options = o.build();
    ecb_curve *l = nullptr, *r = nullptr;
    check(ecb_curve_subdivide(curve.get(), number(cfg["subdivide"]), &options, &l, &r));
    Curve left(l), right(r);
    emit_curve("left", left.get(), o, plot);
    emit_curve("right", right.get(), o, plot);
  }
  write_svg(fs::path(o.out) / "curve.svg", "B-curve", plot);
  std::cout << "wrote " << plot.size() << " polylines to " << (fs::path(o.out) / "curve.svg").string() << '\n';
  return 0;
}

ecb_direction direction_of(const json& j) {
  const auto d = j.get<std::string>();
  if (d == "u0") return ECB_U0;
  if (d == "u1") return ECB_U1;
  config_error("direction must be u0 or u1");
}

Surface surface_from_config(const json& cfg, const Options& o) {
  auto u0 = make_space(field(cfg, "u0"), o);
  auto u1 = make_space(field(cfg, "u1"), o);
  ecb_surface* s = nullptr;
  if (cfg.contains("net")) {
    std::vector<double> flat;
    for (const auto& row : cfg["net"])
      for (const auto& p : row) {
        if (!p.is_array() || p.size() != 3) config_error("net points must have three coordinates");
        for (const auto& v : p) flat.push_back(number(v));
      }
    const std::size_t expected = static_cast<std::size_t>(ecb_space_dimension(u0.get()) * ecb_space_dimension(u1.get())) * 3;
    if (flat.size() != expected) config_error("net size does not match the spaces");
    check(ecb_surface_create(u0.get(), u1.get(), flat.data(), &s));
  } else if (cfg.contains("separable")) {
    const auto& coords = cfg["separable"];
    if (!coords.is_array() || coords.size() != 3) config_error("separable needs one term list per coordinate");
    std::size_t counts[3];
    std::vector<double> c0, c1;
    for (std::size_t l = 0; l < 3; ++l) {
      counts[l] = coords[l].size();
      for (const auto& term : coords[l]) {
        const auto a = coefficients(field(term, "u0"), u0.get());
        const auto b = coefficients(field(term, "u1"), u1.get());
        c0.insert(c0.end(), a.begin(), a.end());
        c1.insert(c1.end(), b.begin(), b.end());
      }
    }
    check(ecb_surface_from_separable(u0.get(), u1.get(), counts, c0.data(), c1.data(), &s));
  } else {
    config_error("surface needs net or separable");
  }
  return Surface(s);
}

// Applies the optional "elevate" and "subdivide" steps in order.
Surface transform_surface(Surface s, const json& cfg, const Options& o) {
  if (cfg.contains("elevate")) {
    for (const char* key : {"u0", "u1"}) {
      if (!cfg["elevate"].contains(key)) continue;
      auto target = make_space(cfg["elevate"][key], o);
      ecb_surface* e = nullptr;
      check(ecb_surface_elevate(s.get(), direction_of(key), target.get(), &e));
      s.reset(e);
    }
  }
  if (cfg.contains("subdivide")) {
    const auto options = o.build();
    for (const auto& step : cfg["subdivide"]) {
      ecb_surface *first = nullptr, *second = nullptr;
      check(ecb_surface_subdivide(s.get(), direction_of(field(step, "direction")), number(field(step, "gamma")),
                                  &options, &first, &second));
      Surface a(first), b(second);
      s = step.value("keep", std::string("first")) == "second" ? std::move(b) : std::move(a);
    }
  }
  return s;
}

int run_surface(const json& cfg, const Options& o) {
  auto s = transform_surface(surface_from_config(cfg, o), cfg, o);
  const auto [m0, m1] = parse_grid(o.grid);
  std::optional<std::string> kind;
  if (cfg.contains("field")) kind = cfg["field"].get<std::string>();

  ecb_mesh* raw = nullptr;
  check(ecb_surface_tessellate(s.get(), m0, m1, kind ? kind->c_str() : nullptr, o.workers, &raw));
  Mesh mesh(raw);
  const auto obj = fs::path(o.out) / "surface.obj";
  check(ecb_mesh_write_obj(mesh.get(), obj.c_str()));
  std::size_t vertices = 0, faces = 0;
  check(ecb_mesh_counts(mesh.get(), &vertices, &faces));

  std::size_t rows = 0, cols = 0;
  check(ecb_surface_net_size(s.get(), &rows, &cols));
  std::vector<double> net(rows * cols * 3), flat;
  check(ecb_surface_net(s.get(), net.data()));
  for (std::size_t i = 0; i < rows * cols; ++i) {
    flat.push_back(static_cast<double>(i / cols));
    flat.push_back(static_cast<double>(i % cols));
    flat.insert(flat.end(), net.begin() + static_cast<long>(3 * i), net.begin() + static_cast<long>(3 * i + 3));
  }
  write_csv(fs::path(o.out) / "net.csv", {"i0", "i1", "x", "y", "z"}, flat);

  if (kind) {
    std::vector<double> values(static_cast<std::size_t>(m0 * m1)), out;
    check(ecb_surface_field(s.get(), m0, m1, kind->c_str(), o.workers, values.data()));
    ecb_space *r0 = nullptr, *r1 = nullptr;
    check(ecb_surface_space(s.get(), ECB_U0, &r0));
    Space s0(r0);
    check(ecb_surface_space(s.get(), ECB_U1, &r1));
    Space s1(r1);
    const auto [a0, b0] = interval(s0.get());
    const auto [a1, b1] = interval(s1.get());
    const auto g0 = uniform(a0, b0, m0), g1 = uniform(a1, b1, m1);
    for (int i = 0; i < m0 * m1; ++i)
      out.insert(out.end(), {g0[static_cast<std::size_t>(i / m1)], g1[static_cast<std::size_t>(i % m1)],
                             values[static_cast<std::size_t>(i)]});
    write_csv(fs::path(o.out) / "field.csv", {"u0", "u1", *kind}, out);
  }

  if (cfg.contains("isolines")) {
    for (const char* key : {"u0", "u1"}) {
      if (!cfg["isolines"].contains(key)) continue;
      const auto& spec = cfg["isolines"][key];
      const int lines = static_cast<int>(number(spec[0])), samples = static_cast<int>(number(spec[1]));
      const std::size_t per = static_cast<std::size_t>(o.dmax + 1) * 3;
      std::vector<double> params(static_cast<std::size_t>(lines * samples)), values(params.size() * per), rows_out;
      check(ecb_surface_isolines(s.get(), direction_of(key), lines, samples, o.dmax, params.data(), values.data()));
      std::vector<std::string> header{"line", "u"};
      for (int j = 0; j <= o.dmax; ++j)
        for (const char* c : {"x", "y", "z"}) header.push_back(j == 0 ? c : "d" + std::to_string(j) + c);
      for (std::size_t i = 0; i < params.size(); ++i) {
        rows_out.push_back(static_cast<double>(i / static_cast<std::size_t>(samples)));
        rows_out.push_back(params[i]);
        rows_out.insert(rows_out.end(), values.begin() + static_cast<long>(i * per),
                        values.begin() + static_cast<long>((i + 1) * per));
      }
      write_csv(fs::path(o.out) / (std::string("isolines_") + key + ".csv"), header, rows_out);
    }
  }
  std::cout << "mesh " << m0 << "x" << m1 << ": " << vertices << " vertices, " << faces << " faces -> "
            << obj.string() << '\n';
  return 0;
}

int run_critical_length(const json& cfg, const Options& o) {
  const auto zeros = zeros_of(field(cfg, "zeros"));
  const double alpha = cfg.contains("alpha") ? number(cfg["alpha"]) : 0.0;
  const double cap = cfg.contains("search_cap") ? number(cfg["search_cap"]) : 0.0;
  double length = 0, design = 0;
  check(ecb_critical_length(zeros.data(), zeros.size(), alpha, cap, 0, &length));
  check(ecb_critical_length(zeros.data(), zeros.size(), alpha, cap, 1, &design));
  const auto show = [](double v) -> json { return std::isinf(v) ? json("infinity") : json(v); };
  write_json(fs::path(o.out) / "critical_length.json", {{"critical_length", show(length)}, {"critical_length_for_design", show(design)}});
  std::printf("critical length: %.15g\ncritical length for design: %.15g\n", length, design);
  return 0;
}

// Times one stage: one discarded warm-up run, then o.trials measured runs.
template <class F>
json time_stage(const std::string& name, const Options& o, F&& body) {
  body();
  std::vector<double> ms;
  for (int t = 0; t < o.trials; ++t) {
    const auto start = std::chrono::steady_clock::now();
    body();
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  ecb_interval ci{};
  check(ecb_confidence_interval(ms.data(), ms.size(), o.significance, &ci));
  std::printf("%-28s mean %10.4f ms  sd %9.4f  CI [%.4f, %.4f]\n", name.c_str(), ci.mean, ci.stddev, ci.lower, ci.upper);
  return {{"stage", name}, {"mean_ms", ci.mean}, {"stddev_ms", ci.stddev}, {"lower_ms", ci.lower}, {"upper_ms", ci.upper},
          {"trials", ci.count}};
}

int run_bench(const json& cfg, const Options& o) {
  if (o.trials < 2) throw Failure("InvalidArgument: --trials must be at least 2");
  json results = json::array();
  std::vector<json> spaces;
  if (cfg.contains("space")) spaces.push_back(cfg["space"]);
  if (cfg.contains("spaces"))
    for (const auto& s : cfg["spaces"]) spaces.push_back(s);
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    const auto& spec = spaces[k];
    const std::string tag = spec.value("name", "space" + std::to_string(k));
    results.push_back(time_stage(tag + " construction", o, [&] { make_space(spec, o); }));
    auto space = make_space(spec, o);
    const int dim = ecb_space_dimension(space.get());
    const auto [a, b] = interval(space.get());
    const auto us = uniform(a, b, o.samples);
    std::vector<double> buf(static_cast<std::size_t>(dim));
    results.push_back(time_stage(tag + " evaluation", o, [&] {
      for (double u : us)
        for (int j = 0; j <= o.dmax; ++j) check(ecb_space_eval_basis(space.get(), j, u, buf.data()));
    }));
    std::vector<double> t(static_cast<std::size_t>(dim * dim));
    results.push_back(time_stage(tag + " transformation", o,
                                 [&] { check(ecb_space_transformation(space.get(), t.data(), nullptr)); }));
  }
  if (cfg.contains("u0") && cfg.contains("u1")) {
    const auto [m0, m1] = parse_grid(o.grid);
    auto s = surface_from_config(cfg, o);
    const char* kind = nullptr;
    std::string field_name = cfg.value("field", std::string());
    if (!field_name.empty()) kind = field_name.c_str();
    results.push_back(time_stage("surface representation", o, [&] { surface_from_config(cfg, o); }));
    results.push_back(time_stage("tessellation " + o.grid, o, [&] {
      ecb_mesh* m = nullptr;
      check(ecb_surface_tessellate(s.get(), m0, m1, kind, o.workers, &m));
      ecb_mesh_free(m);
    }));
  }
  if (results.empty()) config_error("bench needs space, spaces, or u0/u1 surface entries");
  write_json(fs::path(o.out) / "bench.json", {{"significance", o.significance}, {"trials", o.trials}, {"stages", results}});
  return 0;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("IoFailure: cannot open config " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    config_error(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"EC-space normalized B-basis kernel"};
  app.require_subcommand(1);
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--samples", o.samples, "samples per curve or basis function")->check(CLI::Range(2, 10000000));
    sub->add_option("--grid", o.grid, "surface grid M0xM1");
    sub->add_option("--dmax", o.dmax, "highest derivative order written")->check(CLI::NonNegativeNumber);
    sub->add_flag("--check-conditioning", o.check_conditioning, "abort on ill-conditioned construction stages");
    sub->add_option("--expected-digits", o.expected_digits, "required correct significant digits");
    sub->add_option("--trials", o.trials, "measured trials per bench stage");
    sub->add_option("--significance", o.significance, "confidence interval significance in (0,1)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--workers", o.workers, "threads for grid evaluation (0: all)");
  };
  for (const char* name : {"space", "curve", "surface", "critical-length", "bench"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    sub->callback([&o, name] { o.command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (o.significance <= 0.0 || o.significance >= 1.0) throw Failure("InvalidArgument: --significance must lie in (0,1)");
    const json cfg = load_config(o.config);
    fs::create_directories(o.out);
    if (o.command == "space") return run_space(cfg, o);
    if (o.command == "curve") return run_curve(cfg, o);
    if (o.command == "surface") return run_surface(cfg, o);
    if (o.command == "critical-length") return run_critical_length(cfg, o);
    return run_bench(cfg, o);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IoFailure: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
