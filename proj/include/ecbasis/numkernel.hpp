#pragma once

// Small dense linear algebra used by the B-basis construction and the
// conditioning diagnostics. Matrices here are at most a few dozen rows, so
// everything is plain row-major storage and textbook algorithms.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ecbasis::num {

// Row-major dense matrix. The long double instantiation is used only where
// endpoint systems need residuals beyond double accuracy.
template <class T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T fill = T(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows);

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static BasicMatrix diagonal(std::span<const T> d) {
    BasicMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  T operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  BasicMatrix transposed() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }
  T max_abs() const;
  T frobenius_norm() const;
  bool all_finite() const;

  template <class U>
  BasicMatrix<U> cast() const {
    BasicMatrix<U> m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(r, c) = static_cast<U>((*this)(r, c));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseMatrix = BasicMatrix<double>;
using ExtendedMatrix = BasicMatrix<long double>;

template <class T>
BasicMatrix<T> operator*(const BasicMatrix<T>& a, const BasicMatrix<T>& b);
template <class T>
BasicMatrix<T> operator-(const BasicMatrix<T>& a, const BasicMatrix<T>& b);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);

template <class T>
struct BasicLUFactors {
  BasicMatrix<T> lower;                  // unit diagonal
  BasicMatrix<T> upper;
  std::vector<std::size_t> permutation;  // row i of P·A is row permutation[i] of A
};
using LUFactors = BasicLUFactors<double>;

enum class Orientation { Lower, Upper };

struct ConditionReport {
  double condition_number = 1.0;
  int estimated_correct_digits = 0;
  std::string stage_label;
};

// Relative pivot threshold of the unpivoted factorization.
inline constexpr double kZeroPivotThreshold = 1e-14;

// Doolittle factorization without pivoting. Throws ZeroPivot when a pivot
// falls below kZeroPivotThreshold * max|a|.
template <class T>
BasicLUFactors<T> lu_unpivoted(const BasicMatrix<T>& a);

// Partial-pivoting LU. Throws Singular when no usable pivot remains.
template <class T>
BasicLUFactors<T> lu_pivoted(const BasicMatrix<T>& a);

template <class T>
BasicMatrix<T> solve_with(const BasicLUFactors<T>& lu, const BasicMatrix<T>& b);
DenseMatrix solve_pivoted(const DenseMatrix& a, const DenseMatrix& b);

template <class T>
BasicMatrix<T> invert_triangular(const BasicMatrix<T>& t, Orientation orientation);

// Singular values via cyclic one-sided Jacobi, sorted descending.
std::vector<double> singular_values(const DenseMatrix& a);

int estimated_digits(double condition_number);

// sigma_max / sigma_min. Throws RankDeficient when sigma_min < 1e-300.
ConditionReport condition_svd(const DenseMatrix& a, std::string stage_label = {});

// Rows then columns scaled to unit max-magnitude before the SVD. Diagonal
// scaling is free for the triangular solves used downstream, so this is the
// number that predicts their accuracy.
DenseMatrix equilibrated(const DenseMatrix& a);
ConditionReport equilibrated_condition(const DenseMatrix& a, std::string stage_label = {});

}  // namespace ecbasis::num
