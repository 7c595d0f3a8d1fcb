#include <algorithm>
#include <cmath>
#include <functional>

#include "ecbasis/ecspace.hpp"
#include "ecbasis/error.hpp"

namespace ecbasis {

namespace {

// Determinant by Gaussian elimination with partial pivoting; exact zeros are
// reported as 0 rather than as an error because sign scans pass through them.
double determinant(DenseMatrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(p, k))) p = r;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return det;
}

// Canonical basis at alpha: c_m^{(j)}(alpha) = delta_{jm}. Its trailing
// Wronskians differ from those of the bicanonical basis by a unit-triangular
// change of basis only, so they share their zeros.
class CanonicalSystem {
 public:
  CanonicalSystem(const CharacteristicPolynomial& p, double alpha) : basis_(p.ordinary_basis()) {
    const std::size_t dim = basis_.size();
    DenseMatrix phi(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) phi(j, k) = basis_[k].derivative(static_cast<int>(j), alpha);
    try {
      coeffs_ = num::solve_pivoted(phi, DenseMatrix::identity(dim));
    } catch (const Error&) {
      throw Error(ErrorCode::SearchFailed, "initial value system at alpha is singular");
    }
  }

  std::size_t dimension() const { return basis_.size(); }

  // Wronskian determinant of c_first .. c_n at u.
  double trailing_wronskian(std::size_t first, double u) const {
    const std::size_t dim = basis_.size();
    const std::size_t m = dim - first;
    DenseMatrix phi(m, dim);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < dim; ++k) phi(j, k) = basis_[k].derivative(static_cast<int>(j), u);
    DenseMatrix w(m, m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += phi(j, k) * coeffs_(k, first + c);
        w(j, c) = s;
      }
    return determinant(std::move(w));
  }

 private:
  std::vector<OrdinaryBasisFunction> basis_;
  DenseMatrix coeffs_;
};

// First h in (0, cap] where f changes sign, refined by bisection.
double first_root(const std::function<double(double)>& f, double cap, double step) {
  auto eval = [&f](double h) {
    const double v = f(h);
    if (!std::isfinite(v)) throw Error(ErrorCode::SearchFailed, "determinant evaluation lost finiteness");
    return v;
  };
  double h0 = step;
  double f0 = eval(h0);
  while (f0 == 0.0 && h0 < cap) {
    // A vanishing value this close to the endpoint is the endpoint zero itself.
    h0 += step;
    f0 = eval(h0);
  }
  for (double h1 = h0 + step; h0 < cap; h1 = std::min(cap, h1 + step)) {
    const double f1 = eval(h1);
    if (f1 == 0.0) return h1;
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double lo = h0, hi = h1, flo = f0;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    h0 = h1;
    f0 = f1;
    if (h1 >= cap) break;
  }
  return kInfiniteLength;
}

}  // namespace

double critical_length(const CharacteristicPolynomial& p, double alpha, const CriticalLengthOptions& options) {
  const double cap = options.search_cap.value_or(8.0 * (std::abs(alpha) + 1.0));
  const double step = options.grid_step.value_or(cap / 4096.0);
  if (!(cap > 0.0) || !(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "search cap and grid step must be positive");
  if (p.has_only_real_zeros()) return kInfiniteLength;

  const CanonicalSystem system(p, alpha);
  const std::size_t n = system.dimension() - 1;
  const bool symmetric = p.reflection_invariant();
  const double sign_base = (n % 2 == 0) ? 1.0 : -1.0;

  double best = kInfiniteLength;
  for (std::size_t i = n / 2 + 1; i <= n; ++i) {
    best = std::min(best, first_root([&](double h) { return system.trailing_wronskian(i, alpha + h); }, cap, step));
    if (!symmetric) {
      // (-1)^{n(n+1-i)}
      const double sign = ((n + 1 - i) % 2 == 0) ? 1.0 : sign_base;
      best = std::min(best,
                      first_root([&](double h) { return sign * system.trailing_wronskian(i, alpha - h); }, cap, step));
    }
  }
  return best;
}

double critical_length_for_design(const CharacteristicPolynomial& p, double alpha,
                                  const CriticalLengthOptions& options) {
  if (p.multiplicity_of(0.0, 0.0) < 1) {
    throw Error(ErrorCode::MissingZeroRoot, "the derivative space is only defined when z = 0 is a zero");
  }
  return critical_length(p.derivative_space(), alpha, options);
}

}  // namespace ecbasis
