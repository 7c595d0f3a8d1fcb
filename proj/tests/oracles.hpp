#pragma once

// Independent closed forms used to check the library. Nothing in here calls
// into the B-basis construction.

#include <cmath>
#include <array>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecbasis/bsurface.hpp"
#include "ecbasis/polynomial.hpp"

namespace oracle {

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Bernstein polynomial of degree n on [a, b].
inline double bernstein(int n, int i, double u, double a = 0.0, double b = 1.0) {
  const double t = (u - a) / (b - a);
  return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

// Normalized B-basis of span{1, cos u, sin u} on [a, a + len].
struct TrigQuadratic {
  double a = 0.0;
  double len = std::numbers::pi / 2;

  double s2() const { return std::pow(std::sin(len / 2), 2); }
  double b0(double u) const { return std::pow(std::sin((a + len - u) / 2), 2) / s2(); }
  double b2(double u) const { return std::pow(std::sin((u - a) / 2), 2) / s2(); }
  double b1(double u) const { return 1.0 - b0(u) - b2(u); }
  // d/du sin^2(x/2) = sin(x)/2
  double db0(double u) const { return -std::sin(a + len - u) / 2 / s2(); }
  double db2(double u) const { return std::sin(u - a) / 2 / s2(); }
  double db1(double u) const { return -db0(u) - db2(u); }
};

// Five-point central difference of f at x.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Student t quantile with one degree of freedom (Cauchy).
inline double t_quantile_1dof(double p) { return std::tan(std::numbers::pi * (p - 0.5)); }

inline double torus_gaussian_curvature(double u1, double big_r = 1.25) {
  return std::cos(u1) / (big_r + std::cos(u1));
}

struct NamedSpace {
  std::string name;
  std::vector<ecbasis::CharacteristicZero> zeros;
  double alpha;
  double beta;
};

// The six reference spaces used across the suite.
inline std::vector<NamedSpace> test_spaces() {
  using std::numbers::pi;
  return {
      {"P_8 on [0,1]", {{0, 0, 9}}, 0.0, 1.0},
      {"T_6 on [0,2]", {{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, 0.0, 2.0},
      {"H_6 on [0,3]", {{0, 0, 1}, {1, 0, 1}, {-1, 0, 1}, {2, 0, 1}, {-2, 0, 1}, {3, 0, 1}, {-3, 0, 1}}, 0.0, 3.0},
      {"AT_8 on [-pi/2,pi/2]", {{0, 0, 3}, {0, 1, 2}, {0, 2, 1}}, -pi / 2, pi / 2},
      {"ET_6 on [-2,1/8]", {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {2, 0, 1}, {4, 1, 1}}, -2.0, 0.125},
      {"M_4 on [0,7]", {{0, 0, 1}, {1, 0.2, 1}, {-1, 0.2, 1}}, 0.0, 7.0},
  };
}

inline std::vector<double> grid(double a, double b, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = (i == count - 1) ? b : a + (b - a) * i / (count - 1);
  return g;
}

// Coefficient vector in the ordinary basis of p, given as a list of
// (function, weight) pairs. Looks functions up by identity, so it does not
// depend on the basis ordering.
struct Term {
  ecbasis::OrdinaryBasisFunction f;
  double weight;
};

inline std::vector<double> ordinary_coeffs(const ecbasis::CharacteristicPolynomial& p, std::initializer_list<Term> terms) {
  const auto basis = p.ordinary_basis();
  std::vector<double> c(basis.size(), 0.0);
  for (const auto& t : terms) {
    bool found = false;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (basis[k] == t.f) c[k] += t.weight, found = true;
    if (!found) throw std::runtime_error("function not in space: " + t.f.latex());
  }
  return c;
}

inline ecbasis::OrdinaryBasisFunction one() { return {0, 0, 0, ecbasis::Phase::Cos}; }
inline ecbasis::OrdinaryBasisFunction cos_u(double rate = 0) { return {0, rate, 1, ecbasis::Phase::Cos}; }
inline ecbasis::OrdinaryBasisFunction sin_u(double rate = 0) { return {0, rate, 1, ecbasis::Phase::Sin}; }
inline ecbasis::OrdinaryBasisFunction exp_u(double rate) { return {0, rate, 0, ecbasis::Phase::Cos}; }

// Exponential-trigonometric snail surface and its minimal spaces.
struct Snail {
  static constexpr double w0 = 1.0 / (6 * std::numbers::pi);
  static constexpr double w1 = 1.0 / (3 * std::numbers::pi);
  static constexpr double a0 = 11 * std::numbers::pi / 2, b0 = 49 * std::numbers::pi / 8;
  static constexpr double a1 = -std::numbers::pi / 3, b1 = std::numbers::pi / 3;

  static std::vector<ecbasis::CharacteristicZero> zeros_u0() {
    return {{0, 0, 1}, {0, 1, 1}, {w0, 0, 1}, {w1, 0, 1}, {w0, 1, 1}};
  }
  static std::vector<ecbasis::CharacteristicZero> zeros_u1() { return {{0, 0, 1}, {0, 1, 1}}; }

  static std::array<double, 3> eval(double u0, double u1) {
    const double e0 = std::exp(w0 * u0), e1 = std::exp(w1 * u0), ring = 1.25 + std::cos(u1);
    return {(1 - e0) * std::cos(u0) * ring, (e0 - 1) * std::sin(u0) * ring, 7 - e1 - std::sin(u1) + e0 * std::sin(u1)};
  }

  static ecbasis::SeparableSurfaceSpec spec() {
    const auto p0 = ecbasis::CharacteristicPolynomial::make(zeros_u0());
    const auto p1 = ecbasis::CharacteristicPolynomial::make(zeros_u1());
    const auto ring = ordinary_coeffs(p1, {{one(), 1.25}, {cos_u(), 1}});
    ecbasis::SeparableSurfaceSpec s;
    s.coordinates[0] = {{ordinary_coeffs(p0, {{cos_u(), 1}, {cos_u(w0), -1}}), ring}};
    s.coordinates[1] = {{ordinary_coeffs(p0, {{sin_u(w0), 1}, {sin_u(), -1}}), ring}};
    s.coordinates[2] = {{ordinary_coeffs(p0, {{one(), 7}, {exp_u(w1), -1}}), ordinary_coeffs(p1, {{one(), 1}})},
                        {ordinary_coeffs(p0, {{exp_u(w0), 1}, {one(), -1}}), ordinary_coeffs(p1, {{sin_u(), 1}})}};
    return s;
  }
};

// Torus ((R + cos v) cos u, (R + cos v) sin u, sin v) over T_2 x T_2.
inline ecbasis::SeparableSurfaceSpec torus_spec(double big_r = 1.25) {
  const auto t2 = ecbasis::CharacteristicPolynomial::make({{0, 0, 1}, {0, 1, 1}});
  const auto ring = ordinary_coeffs(t2, {{one(), big_r}, {cos_u(), 1}});
  ecbasis::SeparableSurfaceSpec s;
  s.coordinates[0] = {{ordinary_coeffs(t2, {{cos_u(), 1}}), ring}};
  s.coordinates[1] = {{ordinary_coeffs(t2, {{sin_u(), 1}}), ring}};
  s.coordinates[2] = {{ordinary_coeffs(t2, {{one(), 1}}), ordinary_coeffs(t2, {{sin_u(), 1}})}};
  return s;
}

// Unit sphere (cos u cos v, sin u cos v, sin v) over T_2 x T_2.
inline ecbasis::SeparableSurfaceSpec sphere_spec() {
  const auto t2 = ecbasis::CharacteristicPolynomial::make({{0, 0, 1}, {0, 1, 1}});
  ecbasis::SeparableSurfaceSpec s;
  s.coordinates[0] = {{ordinary_coeffs(t2, {{cos_u(), 1}}), ordinary_coeffs(t2, {{cos_u(), 1}})}};
  s.coordinates[1] = {{ordinary_coeffs(t2, {{sin_u(), 1}}), ordinary_coeffs(t2, {{cos_u(), 1}})}};
  s.coordinates[2] = {{ordinary_coeffs(t2, {{one(), 1}}), ordinary_coeffs(t2, {{sin_u(), 1}})}};
  return s;
}

}  // namespace oracle
