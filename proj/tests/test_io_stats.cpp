#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ecbasis/error.hpp"
#include "ecbasis/io.hpp"
#include "ecbasis/stats.hpp"
#include "oracles.hpp"

using namespace ecbasis;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ecbasis_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_prefix(const std::string& text, const std::string& prefix) {
  int n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

int count_substr(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("confidence interval of constant samples collapses") {
  const double xs[] = {4.5, 4.5, 4.5, 4.5};
  auto ci = confidence_interval(xs, 0.05);
  CHECK(ci.lower == 4.5);
  CHECK(ci.upper == 4.5);
  CHECK(ci.count == 4);
}

TEST_CASE("one degree of freedom matches the Cauchy quantile") {
  CHECK(std::abs(t_quantile(0.995, 1) - oracle::t_quantile_1dof(0.995)) < 1e-10);
  CHECK(std::abs(t_quantile(0.995, 1) - 63.656741162871583) < 1e-10);
  const double xs[] = {1, 3};
  auto ci = confidence_interval(xs, 0.01);
  CHECK(ci.mean == doctest::Approx(2));
  CHECK(ci.stddev == doctest::Approx(std::sqrt(2.0)));
  CHECK(ci.lower == 0.0);
  CHECK(std::abs(ci.upper - (2 + 63.656741162871583)) < 1e-9);
}

TEST_CASE("confidence intervals contain the mean and shrink with more samples") {
  std::mt19937 rng(11);
  std::normal_distribution<double> d(10, 2);
  double previous = 0;
  for (int n : {16, 64, 256, 1024}) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (double& x : xs) x = d(rng);
    auto ci = confidence_interval(xs, 0.05);
    CHECK(ci.lower <= ci.mean);
    CHECK(ci.mean <= ci.upper);
    CHECK(ci.lower >= 0);
    const double width = ci.upper - ci.lower;
    if (previous > 0) CHECK(width / previous == doctest::Approx(0.5).epsilon(0.2));
    previous = width;
  }
  const double one[] = {1.0};
  try {
    confidence_interval(one, 0.05);
    FAIL("expected TooFewSamples");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSamples);
  }
  const double two[] = {1.0, 2.0};
  CHECK_THROWS_AS(confidence_interval(two, 1.5), Error);
}

TEST_CASE("CSV round trip is lossless") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  DenseMatrix m(50, 4);
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = d(rng) * std::pow(10.0, static_cast<double>(r % 9) - 12);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = -0.0;
  const auto path = scratch("roundtrip.csv");
  write_csv(path.string(), {"a", "b", "c", "d"}, m);
  std::vector<std::string> header;
  auto back = read_csv(path.string(), &header);
  CHECK(header == std::vector<std::string>{"a", "b", "c", "d"});
  REQUIRE(back.rows() == 50);
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(back(r, c) == m(r, c));
  CHECK_THROWS_AS(write_csv(path.string(), {"a"}, m), Error);
  CHECK_THROWS_AS(write_csv("/nonexistent_dir/x.csv", {}, m), Error);
}

TEST_CASE("Bernstein SVG has one polyline per function") {
  for (int n : {1, 3, 6}) {
    std::vector<Polyline> lines(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i)
      for (double u : oracle::grid(0, 1, 101)) {
        lines[static_cast<std::size_t>(i)].x.push_back(u);
        lines[static_cast<std::size_t>(i)].y.push_back(oracle::bernstein(n, i, u));
      }
    const auto path = scratch("bernstein.svg");
    write_svg(path.string(), "Bernstein", lines);
    const auto text = slurp(path);
    CHECK(count_substr(text, "<polyline") == n + 1);
    CHECK(count_substr(text, "<line") == 2);
  }
}

TEST_CASE("OBJ records for a 2x2 mesh") {
  TriangleMesh mesh;
  mesh.positions = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
  mesh.normals.assign(4, Point3{0, 0, 1});
  mesh.texcoords = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  mesh.colors.assign(4, Point3{1, 0, 0});
  mesh.faces = {{0, 2, 3}, {0, 3, 1}};
  const auto path = scratch("quad.obj");
  write_obj(path.string(), mesh);
  const auto text = slurp(path);
  CHECK(count_prefix(text, "v ") == 4);
  CHECK(count_prefix(text, "vn ") == 4);
  CHECK(count_prefix(text, "vt ") == 4);
  CHECK(count_prefix(text, "f ") == 2);
  CHECK(text.find("f 1/1/1 3/3/3 4/4/4") != std::string::npos);
  mesh.normals.pop_back();
  CHECK_THROWS_AS(write_obj(path.string(), mesh), Error);
}

TEST_CASE("colormap anchors") {
  CHECK(colormap(0.0) == Point3{0.0, 0.0, 0.5});
  CHECK(colormap(0.25) == Point3{0.0, 1.0, 1.0});
  CHECK(colormap(0.5) == Point3{0.0, 1.0, 0.0});
  CHECK(colormap(0.75) == Point3{1.0, 1.0, 0.0});
  CHECK(colormap(1.0) == Point3{1.0, 0.0, 0.0});
  CHECK(colormap(2.0) == colormap(1.0));
}
