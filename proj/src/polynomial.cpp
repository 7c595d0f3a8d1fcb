#include "ecbasis/polynomial.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <tuple>

#include "ecbasis/error.hpp"

namespace ecbasis {

namespace {

auto order_key(double a, double b) { return std::make_tuple(std::abs(a) + std::abs(b), a, b); }

std::vector<CharacteristicZero> normalize(std::vector<CharacteristicZero> zeros) {
  std::vector<CharacteristicZero> out;
  for (auto z : zeros) {
    if (z.multiplicity < 1) {
      throw Error(ErrorCode::InvalidArgument, "zero multiplicity must be at least 1");
    }
    if (!std::isfinite(z.re) || !std::isfinite(z.im)) {
      throw Error(ErrorCode::InvalidArgument, "zero must be finite");
    }
    z.im = std::abs(z.im);
    if (z.re == 0.0) z.re = 0.0;  // drop negative zero
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const CharacteristicZero& o) { return o.re == z.re && o.im == z.im; });
    if (it != out.end()) {
      it->multiplicity += z.multiplicity;
    } else {
      out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end(), [](const CharacteristicZero& x, const CharacteristicZero& y) {
    return order_key(x.re, x.im) < order_key(y.re, y.im);
  });
  return out;
}

double falling_factorial(int r, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= static_cast<double>(r - i);
  return f;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// Coefficient prefix for a factor c·u, e.g. "u", "-u", "2u".
std::string scaled_u(double c) {
  if (c == 1.0) return "u";
  if (c == -1.0) return "-u";
  return format_number(c) + "u";
}

template <class T>
T ordinary_derivative(const OrdinaryBasisFunction& f, int order, T u) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative differentiation order");
  const T a = f.exp_rate;
  const T b = f.frequency;
  const T e = std::exp(a * u);

  // m-th derivative of e^{au} cos(bu) (or sin).
  auto trig_part = [&](int m) -> T {
    if (f.frequency == 0.0) {
      if (f.phase == Phase::Sin) return 0;
      return (m == 0 ? T(1) : std::pow(a, m)) * e;
    }
    if (f.exp_rate == 0.0) {
      // Quarter-turn rotation per derivative keeps this exact.
      const T c = std::cos(b * u);
      const T s = std::sin(b * u);
      const T scale = std::pow(b, m);
      const int q = m % 4;
      if (f.phase == Phase::Cos) {
        constexpr std::array<int, 4> sign_c{1, 0, -1, 0};
        constexpr std::array<int, 4> sign_s{0, -1, 0, 1};
        return scale * (sign_c[q] * c + sign_s[q] * s) * e;
      }
      constexpr std::array<int, 4> sign_c{0, 1, 0, -1};
      constexpr std::array<int, 4> sign_s{1, 0, -1, 0};
      return scale * (sign_c[q] * c + sign_s[q] * s) * e;
    }
    const T rho = std::hypot(a, b);
    const T theta = std::atan2(b, a);
    const T arg = b * u + m * theta;
    return std::pow(rho, m) * e * (f.phase == Phase::Cos ? std::cos(arg) : std::sin(arg));
  };

  // Leibniz rule over u^r * (e^{au} trig(bu)).
  T sum = 0;
  const int kmax = std::min(order, f.power);
  for (int k = 0; k <= kmax; ++k) {
    const int rk = f.power - k;
    const T poly = falling_factorial(f.power, k) * (rk == 0 ? T(1) : std::pow(u, rk));
    sum += T(binomial(order, k)) * poly * trig_part(order - k);
  }
  return sum;
}

}  // namespace

double OrdinaryBasisFunction::derivative(int order, double u) const {
  return ordinary_derivative<double>(*this, order, u);
}

long double OrdinaryBasisFunction::derivative_extended(int order, long double u) const {
  return ordinary_derivative<long double>(*this, order, u);
}

std::string OrdinaryBasisFunction::latex() const {
  std::string s;
  if (power == 1) s += "u";
  else if (power > 1) s += "u^{" + std::to_string(power) + "}";
  if (exp_rate != 0.0) s += "e^{" + scaled_u(exp_rate) + "}";
  if (frequency != 0.0) {
    s += phase == Phase::Cos ? "\\cos(" : "\\sin(";
    s += scaled_u(frequency) + ")";
  }
  return s.empty() ? "1" : s;
}

CharacteristicPolynomial CharacteristicPolynomial::make(std::vector<CharacteristicZero> zeros) {
  auto p = make_unchecked(std::move(zeros));
  if (p.multiplicity_of(0.0, 0.0) < 1) {
    throw Error(ErrorCode::MissingZeroRoot, "z = 0 must be a zero so that constants lie in the space");
  }
  if (p.degree() < 2) {
    throw Error(ErrorCode::InvalidArgument, "the space needs dimension at least 2");
  }
  return p;
}

CharacteristicPolynomial CharacteristicPolynomial::make_unchecked(std::vector<CharacteristicZero> zeros) {
  if (zeros.empty()) throw Error(ErrorCode::InvalidArgument, "no zeros given");
  CharacteristicPolynomial p;
  p.zeros_ = normalize(std::move(zeros));
  for (const auto& z : p.zeros_) p.degree_ += z.degree();
  return p;
}

int CharacteristicPolynomial::multiplicity_of(double re, double im) const noexcept {
  im = std::abs(im);
  for (const auto& z : zeros_)
    if (z.re == re && z.im == im) return z.multiplicity;
  return 0;
}

bool CharacteristicPolynomial::has_only_real_zeros() const noexcept {
  return std::all_of(zeros_.begin(), zeros_.end(), [](const auto& z) { return z.is_real(); });
}

std::complex<double> CharacteristicPolynomial::operator()(std::complex<double> z) const {
  std::complex<double> v = 1.0;
  for (const auto& zero : zeros_) {
    const std::complex<double> root(zero.re, zero.im);
    std::complex<double> f = z - root;
    if (!zero.is_real()) f *= z - std::conj(root);
    for (int m = 0; m < zero.multiplicity; ++m) v *= f;
  }
  return v;
}

std::vector<double> CharacteristicPolynomial::coefficients() const {
  std::vector<double> c{1.0};
  auto multiply = [&c](const std::vector<double>& f) {
    std::vector<double> r(c.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) r[i + j] += c[i] * f[j];
    c = std::move(r);
  };
  for (const auto& z : zeros_) {
    // Ascending powers: (z - a) or (z^2 - 2a z + a^2 + b^2).
    const std::vector<double> factor =
        z.is_real() ? std::vector<double>{-z.re, 1.0}
                    : std::vector<double>{z.re * z.re + z.im * z.im, -2.0 * z.re, 1.0};
    for (int m = 0; m < z.multiplicity; ++m) multiply(factor);
  }
  return c;
}

bool CharacteristicPolynomial::reflection_invariant() const noexcept {
  return std::all_of(zeros_.begin(), zeros_.end(), [this](const auto& z) {
    return multiplicity_of(z.re == 0.0 ? 0.0 : -z.re, z.im) == z.multiplicity;
  });
}

CharacteristicPolynomial CharacteristicPolynomial::derivative_space() const {
  std::vector<CharacteristicZero> zs;
  bool removed = false;
  for (auto z : zeros_) {
    if (!removed && z.is_origin()) {
      removed = true;
      if (--z.multiplicity == 0) continue;
    }
    zs.push_back(z);
  }
  if (!removed) throw Error(ErrorCode::MissingZeroRoot, "no factor z to remove");
  if (zs.empty()) throw Error(ErrorCode::InvalidArgument, "derivative space is trivial");
  return make_unchecked(std::move(zs));
}

CharacteristicPolynomial CharacteristicPolynomial::reflected() const {
  std::vector<CharacteristicZero> zs = zeros_;
  for (auto& z : zs) z.re = -z.re;
  return make_unchecked(std::move(zs));
}

bool CharacteristicPolynomial::contains(const CharacteristicPolynomial& other) const noexcept {
  return std::all_of(other.zeros_.begin(), other.zeros_.end(), [this](const auto& z) {
    return multiplicity_of(z.re, z.im) >= z.multiplicity;
  });
}

std::vector<OrdinaryBasisFunction> CharacteristicPolynomial::ordinary_basis() const {
  std::vector<OrdinaryBasisFunction> basis;
  basis.reserve(static_cast<std::size_t>(degree_));
  for (const auto& z : zeros_) {
    for (int r = 0; r < z.multiplicity; ++r) {
      basis.push_back({r, z.re, z.im, Phase::Cos});
      if (!z.is_real()) basis.push_back({r, z.re, z.im, Phase::Sin});
    }
  }
  return basis;
}

}  // namespace ecbasis
