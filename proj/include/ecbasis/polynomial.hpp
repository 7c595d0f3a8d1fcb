#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ecbasis {

// A zero a + ib of the characteristic polynomial. With b > 0 the entry stands
// for the conjugate pair a ± ib, each of the given multiplicity.
struct CharacteristicZero {
  double re = 0.0;
  double im = 0.0;
  int multiplicity = 1;

  bool is_real() const noexcept { return im == 0.0; }
  bool is_origin() const noexcept { return re == 0.0 && im == 0.0; }
  // Number of characteristic roots (and ordinary basis functions) it contributes.
  int degree() const noexcept { return is_real() ? multiplicity : 2 * multiplicity; }
};

enum class Phase { Cos, Sin };

// u^r e^{au} cos(bu) or u^r e^{au} sin(bu).
struct OrdinaryBasisFunction {
  int power = 0;
  double exp_rate = 0.0;
  double frequency = 0.0;
  Phase phase = Phase::Cos;

  double operator()(double u) const { return derivative(0, u); }
  double derivative(int order, double u) const;
  // Same formula carried out in extended precision; used where the endpoint
  // systems need residuals beyond double accuracy.
  long double derivative_extended(int order, long double u) const;
  std::string latex() const;

  friend bool operator==(const OrdinaryBasisFunction&, const OrdinaryBasisFunction&) = default;
};

class CharacteristicPolynomial {
 public:
  CharacteristicPolynomial() = default;

  // Validated factory: requires z = 0 among the zeros so that constants lie
  // in the solution space. Merges duplicate zeros and normalizes b >= 0.
  static CharacteristicPolynomial make(std::vector<CharacteristicZero> zeros);

  // Same normalization without the z = 0 requirement; used for derivative
  // spaces, which in general do not contain the constants.
  static CharacteristicPolynomial make_unchecked(std::vector<CharacteristicZero> zeros);

  const std::vector<CharacteristicZero>& zeros() const noexcept { return zeros_; }

  // n + 1, counting each conjugate pair twice.
  int degree() const noexcept { return degree_; }
  int dimension() const noexcept { return degree_; }
  int order() const noexcept { return degree_ - 1; }

  int multiplicity_of(double re, double im) const noexcept;
  bool has_only_real_zeros() const noexcept;

  std::complex<double> operator()(std::complex<double> z) const;

  // gamma_0 .. gamma_{n+1} of p(z) = sum gamma_i z^i, expanded from the factors.
  std::vector<double> coefficients() const;

  // Zero multiset symmetric under z -> -z (p even or odd).
  bool reflection_invariant() const noexcept;

  // Characteristic polynomial of the derivative space: one factor z removed.
  CharacteristicPolynomial derivative_space() const;

  // Zero multiset negated: the space of u -> f(-u).
  CharacteristicPolynomial reflected() const;

  // Multiset containment, used to validate nested spaces.
  bool contains(const CharacteristicPolynomial& other) const noexcept;

  // Deterministic ordinary basis: ordered by |a|+|b|, then a, then b, then
  // power, cos before sin. The constant always comes first.
  std::vector<OrdinaryBasisFunction> ordinary_basis() const;

 private:
  std::vector<CharacteristicZero> zeros_;
  int degree_ = 0;
};

}  // namespace ecbasis
