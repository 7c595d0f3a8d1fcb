#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ecbasis/bsurface.hpp"
#include "ecbasis/error.hpp"
#include "oracles.hpp"

using namespace ecbasis;
using std::numbers::pi;

namespace {

SpacePtr space(const std::vector<CharacteristicZero>& zeros, double a, double b) {
  return build_space(CharacteristicPolynomial::make(zeros), a, b);
}

SpacePtr p1() { return space({{0, 0, 2}}, 0, 1); }
SpacePtr t2(double a, double b) { return space({{0, 0, 1}, {0, 1, 1}}, a, b); }

BSurface bilinear() { return BSurface(p1(), p1(), {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}); }

BSurface snail() {
  using oracle::Snail;
  return represent_ordinary_surface(space(Snail::zeros_u0(), Snail::a0, Snail::b0),
                                    space(Snail::zeros_u1(), Snail::a1, Snail::b1), Snail::spec());
}

double distance(const Point3& a, const Point3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

double deviation(const BSurface& a, const BSurface& b, int m) {
  double worst = 0;
  for (double u0 : oracle::grid(a.space(Direction::U0).alpha(), a.space(Direction::U0).beta(), m))
    for (double u1 : oracle::grid(a.space(Direction::U1).alpha(), a.space(Direction::U1).beta(), m))
      worst = std::max(worst, distance(a.eval(0, 0, u0, u1), b.eval(0, 0, u0, u1)));
  return worst;
}

double snail_error(const BSurface& s, int m) {
  double worst = 0;
  for (double u0 : oracle::grid(s.space(Direction::U0).alpha(), s.space(Direction::U0).beta(), m))
    for (double u1 : oracle::grid(s.space(Direction::U1).alpha(), s.space(Direction::U1).beta(), m))
      worst = std::max(worst, distance(s.eval(0, 0, u0, u1), oracle::Snail::eval(u0, u1)));
  return worst;
}

}  // namespace

TEST_CASE("bilinear patch") {
  auto s = bilinear();
  auto m = s.eval(0, 0, 0.5, 0.5);
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
  CHECK(m[2] == doctest::Approx(0.25));
  CHECK(distance(s.eval(0, 0, 0, 0), s.point(0, 0)) == 0.0);
  CHECK(distance(s.eval(0, 0, 1, 1), s.point(1, 1)) < 1e-15);
  CHECK_THROWS_AS(s.eval(0, 0, 1.5, 0), Error);
  CHECK_THROWS_AS(BSurface(p1(), p1(), {{0, 0, 0}}), Error);

  auto e = elevate_order_surface(s, Direction::U0, space({{0, 0, 3}}, 0, 1));
  CHECK(e.rows() == 3);
  for (std::size_t i1 = 0; i1 < 2; ++i1)
    for (int k = 0; k < 3; ++k)
      CHECK(e.point(1, i1)[k] == doctest::Approx((s.point(0, i1)[k] + s.point(1, i1)[k]) / 2));

  auto [l, r] = subdivide_surface(s, Direction::U1, 0.5);
  for (std::size_t i0 = 0; i0 < 2; ++i0)
    for (int k = 0; k < 3; ++k) {
      const double mid = (s.point(i0, 0)[k] + s.point(i0, 1)[k]) / 2;
      CHECK(std::abs(l.point(i0, 1)[k] - mid) < 1e-14);
      CHECK(std::abs(r.point(i0, 0)[k] - mid) < 1e-14);
    }

  auto lines = isoparametric_lines(s, Direction::U0, 1, 5, 1);
  REQUIRE(lines.size() == 1);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& d = lines[0].derivatives[i];
    CHECK(d(0, 0) == doctest::Approx(lines[0].parameters[i]));
    CHECK(std::abs(d(0, 2)) < 1e-15);
    CHECK(d(1, 0) == doctest::Approx(1));
  }
}

TEST_CASE("corner interpolation and net hull for random nets") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  auto s0 = space(oracle::test_spaces()[3].zeros, -pi / 2, pi / 2);
  auto s1 = t2(0, 2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Point3> net(static_cast<std::size_t>(s0->dimension() * s1->dimension()));
    for (auto& p : net) p = {d(rng), d(rng), d(rng)};
    BSurface s(s0, s1, net);
    CHECK(distance(s.eval(0, 0, -pi / 2, 0), s.point(0, 0)) < 1e-10);
    CHECK(distance(s.eval(0, 0, pi / 2, 2), s.point(s.rows() - 1, s.cols() - 1)) < 1e-10);
    CHECK(distance(s.eval(0, 0, -pi / 2, 2), s.point(0, s.cols() - 1)) < 1e-10);
    // Bounding box of the net is a necessary consequence of hull containment.
    Point3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& p : net)
      for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], p[k]), hi[k] = std::max(hi[k], p[k]);
    for (double u0 : oracle::grid(-pi / 2, pi / 2, 15))
      for (double u1 : oracle::grid(0, 2, 15)) {
        auto p = s.eval(0, 0, u0, u1);
        for (int k = 0; k < 3; ++k) {
          CHECK(p[k] >= lo[k] - 1e-9);
          CHECK(p[k] <= hi[k] + 1e-9);
        }
      }
  }
}

TEST_CASE("analytic partials match finite differences") {
  auto s = snail();
  const double h = 1e-4;
  int checked = 0;
  for (double u0 : oracle::grid(oracle::Snail::a0 + 0.2, oracle::Snail::b0 - 0.2, 5))
    for (double u1 : oracle::grid(oracle::Snail::a1 + 0.2, oracle::Snail::b1 - 0.2, 5))
      for (int j0 = 0; j0 <= 2; ++j0)
        for (int j1 = 0; j1 <= 2; ++j1) {
          if (j0 + j1 == 0) continue;
          for (int k = 0; k < 3; ++k) {
            double fd;
            if (j0 > 0)
              fd = oracle::central_difference([&](double x) { return s.eval(j0 - 1, j1, x, u1)[k]; }, u0, h);
            else
              fd = oracle::central_difference([&](double x) { return s.eval(j0, j1 - 1, u0, x)[k]; }, u1, h);
            const double exact = s.eval(j0, j1, u0, u1)[k];
            CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
            ++checked;
          }
        }
  CHECK(checked == 25 * 8 * 3);
}

TEST_CASE("snail patch is represented exactly") {
  auto s = snail();
  CHECK(s.rows() == 7);
  CHECK(s.cols() == 3);
  CHECK(snail_error(s, 41) < 1e-6);
}

TEST_CASE("snail elevations reproduce the patch") {
  using oracle::Snail;
  auto s = snail();
  SUBCASE("raising the multiplicity of zero in both directions") {
    auto zeros0 = Snail::zeros_u0();
    zeros0[0].multiplicity = 2;
    auto e = elevate_order_surface(s, Direction::U0, space(zeros0, Snail::a0, Snail::b0));
    e = elevate_order_surface(e, Direction::U1, space({{0, 0, 2}, {0, 1, 1}}, Snail::a1, Snail::b1));
    CHECK(e.rows() == 8);
    CHECK(e.cols() == 4);
    CHECK(deviation(s, e, 41) < 1e-7);
    CHECK(snail_error(e, 41) < 1e-6);
  }
  SUBCASE("new real zeros and a double conjugate pair") {
    auto zeros0 = Snail::zeros_u0();
    zeros0.push_back({-Snail::w0, 0, 1});
    zeros0.push_back({-Snail::w1, 0, 1});
    auto e = elevate_order_surface(s, Direction::U0, space(zeros0, Snail::a0, Snail::b0));
    e = elevate_order_surface(e, Direction::U1, space({{0, 0, 1}, {0, 1, 2}}, Snail::a1, Snail::b1));
    CHECK(e.rows() == 9);
    CHECK(e.cols() == 5);
    CHECK(deviation(s, e, 41) < 1e-7);
    CHECK(snail_error(e, 41) < 1e-6);
  }
}

TEST_CASE("snail double subdivision") {
  auto s = snail();
  auto [lower, upper] = subdivide_surface(s, Direction::U1, 0.0);
  CHECK(lower.space(Direction::U1).beta() == 0.0);
  for (double u0 : oracle::grid(oracle::Snail::a0, oracle::Snail::b0, 41))
    CHECK(distance(lower.eval(0, 0, u0, 0.0), upper.eval(0, 0, u0, 0.0)) < 1e-9);
  auto [a, b] = subdivide_surface(upper, Direction::U0, 93 * pi / 16);
  for (const auto* piece : {&lower, &a, &b}) {
    CHECK(snail_error(*piece, 41) < 1e-6);
    CHECK(deviation(*piece, s, 41) < 1e-7);
  }
  for (double u1 : oracle::grid(0, oracle::Snail::b1, 41))
    CHECK(distance(a.eval(0, 0, 93 * pi / 16, u1), b.eval(0, 0, 93 * pi / 16, u1)) < 1e-9);
}

TEST_CASE("constant separable surface") {
  SeparableSurfaceSpec spec;
  spec.coordinates[0] = {{{2, 0, 0}, {1, 0, 0}}};
  spec.coordinates[1] = {{{-1, 0, 0}, {1, 0, 0}}};
  spec.coordinates[2] = {{{0.5, 0, 0}, {1, 0, 0}}};
  auto s = represent_ordinary_surface(t2(0, 1), t2(0, 1), spec);
  for (const auto& p : s.net()) {
    CHECK(std::abs(p[0] - 2) < 1e-12);
    CHECK(std::abs(p[1] + 1) < 1e-12);
    CHECK(std::abs(p[2] - 0.5) < 1e-12);
  }
  spec.coordinates[0] = {{{1, 0}, {1, 0, 0}}};
  CHECK_THROWS_AS(represent_ordinary_surface(t2(0, 1), t2(0, 1), spec), Error);
}

TEST_CASE("torus patch: closed form and Gaussian curvature") {
  auto s = represent_ordinary_surface(t2(0, 2 * pi / 3), t2(-pi / 3, pi / 3), oracle::torus_spec());
  double worst = 0;
  for (double u0 : oracle::grid(0, 2 * pi / 3, 41))
    for (double u1 : oracle::grid(-pi / 3, pi / 3, 41)) {
      const double ring = 1.25 + std::cos(u1);
      worst = std::max(worst, distance(s.eval(0, 0, u0, u1), {ring * std::cos(u0), ring * std::sin(u0), std::sin(u1)}));
    }
  CHECK(worst < 1e-9);

  const int m = 21;
  auto k = curvature_field(s, m, m, FieldKind::Gaussian);
  const auto u1s = oracle::grid(-pi / 3, pi / 3, m);
  double kerr = 0;
  for (int i0 = 0; i0 < m; ++i0)
    for (int i1 = 0; i1 < m; ++i1)
      kerr = std::max(kerr, std::abs(k.values[static_cast<std::size_t>(i0 * m + i1)] -
                                     oracle::torus_gaussian_curvature(u1s[static_cast<std::size_t>(i1)])));
  CHECK(kerr < 1e-6);
}

TEST_CASE("sphere patch curvature and radial normals") {
  auto s = represent_ordinary_surface(t2(0, pi / 2), t2(-pi / 3, pi / 3), oracle::sphere_spec());
  auto k = curvature_field(s, 15, 15, FieldKind::Gaussian);
  auto h = curvature_field(s, 15, 15, FieldKind::Mean);
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    CHECK(std::abs(k.values[i] - 1) <= 1e-6);
    CHECK(std::abs(std::abs(h.values[i]) - 1) <= 1e-6);
  }
  auto mesh = tessellate(s, 15, 15);
  double sign = 0;
  for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
    const auto& p = mesh.positions[i];
    const auto& n = mesh.normals[i];
    const double d = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
    if (i == 0) sign = d > 0 ? 1 : -1;
    CHECK(std::abs(d - sign * std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])) < 1e-8);
    CHECK(std::abs(std::hypot(n[0], n[1], n[2]) - 1) < 1e-10);
  }
}

TEST_CASE("plane patch has no curvature") {
  auto s = BSurface(p1(), p1(), {{0, 0, 1}, {0, 2, 1}, {3, 0, 1}, {3, 2, 1}});
  for (auto kind : {FieldKind::Gaussian, FieldKind::Mean}) {
    auto f = curvature_field(s, 4, 4, kind);
    for (double v : f.values) CHECK(std::abs(v) < 1e-14);
  }
  auto degenerate = BSurface(p1(), p1(), {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 0, 0}});
  try {
    curvature_field(degenerate, 3, 3, FieldKind::Gaussian, 2);
    FAIL("expected DegeneratePoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePoint);
  }
}

TEST_CASE("energy fields satisfy their defining identity") {
  auto s = snail();
  const int m = 12;
  auto k = curvature_field(s, m, m, FieldKind::Gaussian);
  auto h = curvature_field(s, m, m, FieldKind::Mean);
  auto w = curvature_field(s, m, m, FieldKind::Willmore);
  auto u = curvature_field(s, m, m, FieldKind::Umbilic);
  auto t = curvature_field(s, m, m, FieldKind::Total);
  auto lt = curvature_field(s, m, m, FieldKind::LogTotal);
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    CHECK(std::abs(t.values[i] - (4 * w.values[i] - 2 * k.values[i])) <= 1e-12 * std::max(1.0, std::abs(t.values[i])));
    CHECK(w.values[i] == doctest::Approx(h.values[i] * h.values[i]));
    CHECK(u.values[i] == doctest::Approx(w.values[i] - k.values[i]));
    CHECK(lt.values[i] == doctest::Approx(std::log1p(std::max(t.values[i], 0.0))));
    CHECK(std::isfinite(t.values[i]));
  }
  CHECK(field_kind_from_string("log_umbilic") == FieldKind::LogUmbilic);
  CHECK_FALSE(field_kind_from_string("bogus").has_value());
}

TEST_CASE("mesh counts follow the grid formulas") {
  auto s = bilinear();
  auto m22 = tessellate(s, 2, 2);
  CHECK(m22.positions.size() == 4);
  CHECK(m22.faces.size() == 2);
  for (int m0 = 2; m0 <= 64; m0 += 7)
    for (int m1 = 2; m1 <= 64; m1 += 9) {
      auto mesh = tessellate(s, m0, m1);
      CHECK(mesh.positions.size() == static_cast<std::size_t>(m0 * m1));
      CHECK(mesh.faces.size() == static_cast<std::size_t>(2 * (m0 - 1) * (m1 - 1)));
    }
  auto big = tessellate(snail(), 50, 100, FieldKind::LogWillmore);
  CHECK(big.positions.size() == 5000);
  CHECK(big.faces.size() == 9702);
}

TEST_CASE("faces are counter-clockwise with respect to the normals") {
  auto mesh = tessellate(snail(), 8, 9);
  for (const auto& f : mesh.faces) {
    const auto &a = mesh.positions[f[0]], &b = mesh.positions[f[1]], &c = mesh.positions[f[2]];
    const Point3 e1{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, e2{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const Point3 n{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
    const auto& vn = mesh.normals[f[0]];
    CHECK(n[0] * vn[0] + n[1] * vn[1] + n[2] * vn[2] > 0);
  }
}

TEST_CASE("grid evaluation does not depend on the worker count") {
  auto s = snail();
  auto one = tessellate(s, 17, 23, FieldKind::Gaussian, 1);
  auto four = tessellate(s, 17, 23, FieldKind::Gaussian, 4);
  CHECK(one.positions == four.positions);
  CHECK(one.normals == four.normals);
  CHECK(one.colors == four.colors);
  CHECK(curvature_field(s, 9, 11, FieldKind::Mean, 1).values == curvature_field(s, 9, 11, FieldKind::Mean, 3).values);
}

TEST_CASE("isoparametric lines") {
  auto s = snail();
  auto along0 = isoparametric_lines(s, Direction::U0, 5, 20, 1);
  auto along1 = isoparametric_lines(s, Direction::U1, 3, 13, 1);
  REQUIRE(along0.size() == 5);
  REQUIRE(along1.size() == 3);
  CHECK(along0[0].parameters.size() == 20);
  CHECK(along1[2].parameters.size() == 13);
  const auto fixed = oracle::grid(oracle::Snail::a1, oracle::Snail::b1, 5);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t i = 0; i < 20; ++i) {
      const double u0 = along0[k].parameters[i];
      const auto& d = along0[k].derivatives[i];
      const auto p = oracle::Snail::eval(u0, fixed[k]);
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(std::abs(d(0, c) - p[c]) < 1e-6);
        if (u0 - 1e-3 < oracle::Snail::a0 || u0 + 1e-3 > oracle::Snail::b0) continue;
        const double fd = oracle::central_difference(
            [&](double x) { return oracle::Snail::eval(x, fixed[k])[c]; }, u0, 1e-4);
        CHECK(std::abs(d(1, c) - fd) < 1e-5);
      }
    }
}
