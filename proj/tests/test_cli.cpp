#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string output;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ecbasis_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run cli(const std::string& args, const fs::path& dir) {
  const auto log = dir / "stdout.txt";
  const std::string cmd = std::string("\"") + ECBASIS_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text};
}

std::string config(const std::string& name) { return "\"" + std::string(ECBASIS_CONFIGS) + "/" + name + "\""; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s, const std::string& prefix = "") {
  std::size_t n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (line.compare(0, prefix.size(), prefix) == 0) ++n;
  return n;
}

std::size_t count_substr(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("space command writes samples and plots") {
  const auto dir = scratch("space");
  const auto r = cli("space --config " + config("example1_space.json") + " --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.status == 0);
  CHECK(r.output.find("reversed Wronskian") != std::string::npos);
  const auto csv = slurp(dir / "basis.csv");
  CHECK(count_lines(csv) == 502);
  const auto header = csv.substr(0, csv.find('\n'));
  CHECK(count_substr(header, ",") == 18);
  CHECK(count_substr(slurp(dir / "bbasis.svg"), "<polyline") == 9);
  CHECK(count_substr(slurp(dir / "ordinary.svg"), "<polyline") == 9);
  CHECK(fs::exists(dir / "space.json"));
}

TEST_CASE("space command fails loudly on insufficient accuracy") {
  const auto dir = scratch("ill");
  const auto r = cli("space --config " + config("example1_space.json") + " --out \"" + dir.string() +
                         "\" --check-conditioning --expected-digits 16",
                     dir);
  CHECK(r.status == 1);
  CHECK(r.output.find("IllConditioned") != std::string::npos);
  CHECK(r.output.find("bicanonical systems") != std::string::npos);
}

TEST_CASE("bad configuration is reported") {
  const auto dir = scratch("bad");
  std::ofstream(dir / "bad.json") << "{ \"space\": { \"zeros\": [[1, 0, 2]], \"interval\": [0, 1] } }";
  const auto r = cli("space --config \"" + (dir / "bad.json").string() + "\" --out \"" + dir.string() + "\"", dir);
  CHECK(r.status == 1);
  CHECK(r.output.find("MissingZeroRoot") != std::string::npos);
}

TEST_CASE("curve command") {
  const auto dir = scratch("curve");
  const auto r = cli("curve --config " + config("quarter_circle.json") + " --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.status == 0);
  CHECK(count_lines(slurp(dir / "curve_control.csv")) == 4);
  CHECK(count_lines(slurp(dir / "curve_samples.csv")) == 502);
  CHECK(fs::exists(dir / "curve.svg"));
}

TEST_CASE("critical-length command") {
  const auto dir = scratch("critical");
  const auto r = cli("critical-length --config " + config("m_space.json") + " --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.status == 0);
  CHECK(r.output.find("16.694941") != std::string::npos);
  CHECK(slurp(dir / "critical_length.json").find("16.694941") != std::string::npos);
}

TEST_CASE("surface command output is deterministic across runs and workers") {
  const auto a = scratch("surface_a"), b = scratch("surface_b");
  const auto base = "surface --config " + config("snail.json") + " --out ";
  const auto ra = cli(base + "\"" + a.string() + "\" --workers 1", a);
  const auto rb = cli(base + "\"" + b.string() + "\" --workers 4", b);
  REQUIRE(ra.status == 0);
  REQUIRE(rb.status == 0);
  const auto obj = slurp(a / "surface.obj");
  CHECK(obj.rfind("# 5000 vertices, 9702 faces", 0) == 0);
  CHECK(count_lines(obj, "v ") == 5000);
  CHECK(count_lines(obj, "vn ") == 5000);
  CHECK(count_lines(obj, "vt ") == 5000);
  CHECK(count_lines(obj, "f ") == 9702);
  CHECK(obj == slurp(b / "surface.obj"));
  for (const char* f : {"field.csv", "net.csv", "isolines_u0.csv", "isolines_u1.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("bench command reports confidence intervals") {
  const auto dir = scratch("bench");
  const auto r =
      cli("bench --config " + config("bench_polynomial.json") + " --out \"" + dir.string() + "\" --trials 3", dir);
  REQUIRE(r.status == 0);
  const auto json = slurp(dir / "bench.json");
  CHECK(count_substr(json, "\"lower_ms\"") == 21);
  CHECK(count_substr(json, "\"upper_ms\"") == 21);
  CHECK(r.output.find("CI [") != std::string::npos);
}
