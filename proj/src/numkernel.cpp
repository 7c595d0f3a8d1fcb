#include "ecbasis/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ecbasis/error.hpp"

namespace ecbasis::num {

template <class T>
BasicMatrix<T>::BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <class T>
T BasicMatrix<T>::max_abs() const {
  T m = 0;
  for (T v : data_) m = std::max(m, std::abs(v));
  return m;
}

template <class T>
T BasicMatrix<T>::frobenius_norm() const {
  T s = 0;
  for (T v : data_) s += v * v;
  return std::sqrt(s);
}

template <class T>
bool BasicMatrix<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template <class T>
BasicMatrix<T> operator*(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  }
  BasicMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class T>
BasicMatrix<T> operator-(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  BasicMatrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

namespace {

template <class T>
void require_square(const BasicMatrix<T>& a, const char* what) {
  if (a.empty() || !a.square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a nonempty square matrix");
  }
}

}  // namespace

template <class T>
BasicLUFactors<T> lu_unpivoted(const BasicMatrix<T>& a) {
  require_square(a, "lu_unpivoted");
  const std::size_t n = a.rows();
  const T threshold = T(kZeroPivotThreshold) * a.max_abs();

  BasicLUFactors<T> f{BasicMatrix<T>::identity(n), BasicMatrix<T>(n, n), {}};
  f.permutation.resize(n);
  std::iota(f.permutation.begin(), f.permutation.end(), std::size_t{0});

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k; j < n; ++j) {
      T s = a(k, j);
      for (std::size_t m = 0; m < k; ++m) s -= f.lower(k, m) * f.upper(m, j);
      f.upper(k, j) = s;
    }
    const T pivot = f.upper(k, k);
    if (!(std::abs(pivot) >= threshold) || pivot == T(0)) {
      throw Error(ErrorCode::ZeroPivot, "pivot " + std::to_string(k) + " vanished");
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      T s = a(i, k);
      for (std::size_t m = 0; m < k; ++m) s -= f.lower(i, m) * f.upper(m, k);
      f.lower(i, k) = s / pivot;
    }
  }
  return f;
}

template <class T>
BasicLUFactors<T> lu_pivoted(const BasicMatrix<T>& a) {
  require_square(a, "lu_pivoted");
  const std::size_t n = a.rows();
  BasicMatrix<T> w = a;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const T scale = a.max_abs();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(w(i, k)) > std::abs(w(best, k))) best = i;
    if (!(std::abs(w(best, k)) > T(1e-18) * scale) ||
        !std::isfinite(w(best, k))) {
      throw Error(ErrorCode::Singular, "no usable pivot in column " + std::to_string(k));
    }
    if (best != k) {
      std::swap_ranges(w.row(k).begin(), w.row(k).end(), w.row(best).begin());
      std::swap(perm[k], perm[best]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      w(i, k) /= w(k, k);
      const T l = w(i, k);
      if (l == T(0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= l * w(k, j);
    }
  }

  BasicLUFactors<T> f{BasicMatrix<T>::identity(n), BasicMatrix<T>(n, n), std::move(perm)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j < i) f.lower(i, j) = w(i, j);
      else f.upper(i, j) = w(i, j);
    }
  return f;
}

template <class T>
BasicMatrix<T> solve_with(const BasicLUFactors<T>& lu, const BasicMatrix<T>& b) {
  const std::size_t n = lu.lower.rows();
  if (b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "right-hand side rows");
  BasicMatrix<T> x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s = b(lu.permutation[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= lu.lower(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      T s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu.upper(i, j) * x(j, c);
      x(i, c) = s / lu.upper(i, i);
    }
  }
  return x;
}

DenseMatrix solve_pivoted(const DenseMatrix& a, const DenseMatrix& b) {
  return solve_with(lu_pivoted(a), b);
}

template <class T>
BasicMatrix<T> invert_triangular(const BasicMatrix<T>& t, Orientation orientation) {
  require_square(t, "invert_triangular");
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (t(i, i) == T(0) || !std::isfinite(t(i, i))) {
      throw Error(ErrorCode::ZeroDiagonal, "diagonal entry " + std::to_string(i) + " is zero");
    }
  }
  BasicMatrix<T> inv(n, n);
  if (orientation == Orientation::Lower) {
    // Column-by-column forward substitution of t * x = e_c.
    for (std::size_t c = 0; c < n; ++c) {
      inv(c, c) = T(1) / t(c, c);
      for (std::size_t i = c + 1; i < n; ++i) {
        T s = 0;
        for (std::size_t k = c; k < i; ++k) s += t(i, k) * inv(k, c);
        inv(i, c) = -s / t(i, i);
      }
    }
  } else {
    for (std::size_t c = 0; c < n; ++c) {
      inv(c, c) = T(1) / t(c, c);
      for (std::size_t i = c; i-- > 0;) {
        T s = 0;
        for (std::size_t k = i + 1; k <= c; ++k) s += t(i, k) * inv(k, c);
        inv(i, c) = -s / t(i, i);
      }
    }
  }
  return inv;
}

#define ECBASIS_INSTANTIATE(T)                                                          \
  template class BasicMatrix<T>;                                                      \
  template BasicMatrix<T> operator*(const BasicMatrix<T>&, const BasicMatrix<T>&);    \
  template BasicMatrix<T> operator-(const BasicMatrix<T>&, const BasicMatrix<T>&);    \
  template BasicLUFactors<T> lu_unpivoted(const BasicMatrix<T>&);                     \
  template BasicLUFactors<T> lu_pivoted(const BasicMatrix<T>&);                       \
  template BasicMatrix<T> solve_with(const BasicLUFactors<T>&, const BasicMatrix<T>&); \
  template BasicMatrix<T> invert_triangular(const BasicMatrix<T>&, Orientation);

ECBASIS_INSTANTIATE(double)
ECBASIS_INSTANTIATE(long double)
#undef ECBASIS_INSTANTIATE

std::vector<double> singular_values(const DenseMatrix& a) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "singular_values of empty matrix");
  // One-sided Jacobi orthogonalises columns, so work with the tall orientation.
  DenseMatrix w = a.rows() >= a.cols() ? a : a.transposed();
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  constexpr double kTolerance = 1e-14;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        if (apq == 0.0 || std::abs(apq) <= kTolerance * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p);
          const double wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

int estimated_digits(double condition_number) {
  if (!std::isfinite(condition_number)) return 0;
  const double digits =
      std::floor(-std::log10(condition_number * std::numeric_limits<double>::epsilon()));
  return digits < 0.0 ? 0 : static_cast<int>(digits);
}

ConditionReport condition_svd(const DenseMatrix& a, std::string stage_label) {
  const auto sigma = singular_values(a);
  const double smax = sigma.front();
  const double smin = sigma.back();
  if (!(smin >= 1e-300)) {
    throw Error(ErrorCode::RankDeficient,
                (stage_label.empty() ? std::string("matrix") : stage_label) +
                    " is numerically rank deficient (condition +inf, 0 digits)");
  }
  const double cond = smax / smin;
  return {cond, estimated_digits(cond), std::move(stage_label)};
}

DenseMatrix equilibrated(const DenseMatrix& a) {
  DenseMatrix s = a;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    double m = 0.0;
    for (double v : s.row(i)) m = std::max(m, std::abs(v));
    if (m > 0.0)
      for (double& v : s.row(i)) v /= m;
  }
  for (std::size_t j = 0; j < s.cols(); ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) m = std::max(m, std::abs(s(i, j)));
    if (m > 0.0)
      for (std::size_t i = 0; i < s.rows(); ++i) s(i, j) /= m;
  }
  return s;
}

ConditionReport equilibrated_condition(const DenseMatrix& a, std::string stage_label) {
  return condition_svd(equilibrated(a), std::move(stage_label));
}

}  // namespace ecbasis::num
