#include "ecbasis/bcurve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecbasis/error.hpp"

namespace ecbasis {

namespace {

bool same_interval(const ECSpace& a, const ECSpace& b) {
  const double tol = 1e-12 * std::max({1.0, std::abs(a.alpha()), std::abs(a.beta())});
  return std::abs(a.alpha() - b.alpha()) <= tol && std::abs(a.beta() - b.beta()) <= tol;
}

void check_nested(const ECSpace& source, const ECSpace& target) {
  if (!same_interval(source, target)) {
    throw Error(ErrorCode::IntervalMismatch, "elevation requires both spaces on the same interval");
  }
  if (!target.polynomial().contains(source.polynomial())) {
    throw Error(ErrorCode::NotASubspace, "source zeros are not contained in the target zeros");
  }
}

// Index of each source ordinary function inside the target ordinary basis.
std::vector<std::size_t> embed_ordinary(const ECSpace& source, const ECSpace& target) {
  std::vector<std::size_t> idx;
  for (const auto& f : source.ordinary()) {
    auto it = std::find(target.ordinary().begin(), target.ordinary().end(), f);
    if (it == target.ordinary().end()) {
      throw Error(ErrorCode::NotASubspace, "ordinary function " + f.latex() + " missing from target");
    }
    idx.push_back(static_cast<std::size_t>(it - target.ordinary().begin()));
  }
  return idx;
}

void add_scaled(std::span<double> dst, std::span<const double> src, double f) {
  for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += f * src[c];
}

}  // namespace

BCurve::BCurve(SpacePtr space, DenseMatrix control_points) : space_(std::move(space)), control_(std::move(control_points)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "curve needs a space");
  if (control_.rows() != static_cast<std::size_t>(space_->dimension()) || control_.cols() == 0) {
    std::ostringstream msg;
    msg << "expected " << space_->dimension() << " control points, got " << control_.rows();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (!control_.all_finite()) throw Error(ErrorCode::InvalidArgument, "control points must be finite");
}

void BCurve::eval(int j, double u, std::span<double> out) const {
  if (out.size() != control_.cols()) throw Error(ErrorCode::DimensionMismatch, "output has wrong dimension");
  const auto b = space_->b_all(j, u);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) add_scaled(out, control_.row(i), b[i]);
}

std::vector<double> BCurve::eval(int j, double u) const {
  std::vector<double> out(control_.cols());
  eval(j, u, out);
  return out;
}

BCurve elevate_order(const BCurve& curve, SpacePtr target) {
  const ECSpace& src = curve.space();
  if (!target) throw Error(ErrorCode::InvalidArgument, "target space missing");
  check_nested(src, *target);
  if (target->dimension() != src.dimension() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "one-step elevation needs exactly one more dimension");
  }
  const int n = src.order();
  const auto& p = curve.control_points();
  DenseMatrix q(static_cast<std::size_t>(n + 2), p.cols());
  auto copy_row = [&](std::size_t to, std::size_t from) {
    std::copy(p.row(from).begin(), p.row(from).end(), q.row(to).begin());
  };
  copy_row(0, 0);
  copy_row(static_cast<std::size_t>(n + 1), static_cast<std::size_t>(n));

  for (int i = 1; i <= n / 2; ++i) {
    const double r = src.b_at_alpha(i, i) / target->b_at_alpha(i, i);
    auto row = q.row(static_cast<std::size_t>(i));
    add_scaled(row, p.row(static_cast<std::size_t>(i - 1)), 1.0 - r);
    add_scaled(row, p.row(static_cast<std::size_t>(i)), r);
  }
  for (int i = 1; i <= (n + 1) / 2; ++i) {
    const double r = src.b_at_beta(n - i, i) / target->b_at_beta(n + 1 - i, i);
    auto row = q.row(static_cast<std::size_t>(n + 1 - i));
    add_scaled(row, p.row(static_cast<std::size_t>(n - i)), r);
    add_scaled(row, p.row(static_cast<std::size_t>(n + 1 - i)), 1.0 - r);
  }
  if (!q.all_finite()) throw Error(ErrorCode::ZeroDenominator, "endpoint derivative ratio is not finite");
  return BCurve(std::move(target), std::move(q));
}

BCurve elevate_to(const BCurve& curve, SpacePtr target, const BuildOptions& options) {
  const ECSpace& src = curve.space();
  if (!target) throw Error(ErrorCode::InvalidArgument, "target space missing");
  check_nested(src, *target);
  const int gap = target->dimension() - src.dimension();
  if (gap == 0) return BCurve(target, curve.control_points());

  // Zeros missing from the source, with multiplicities.
  std::vector<CharacteristicZero> missing;
  bool complex_gap = false;
  for (const auto& z : target->polynomial().zeros()) {
    const int d = z.multiplicity - src.polynomial().multiplicity_of(z.re, z.im);
    if (d > 0) {
      missing.push_back({z.re, z.im, d});
      complex_gap = complex_gap || !z.is_real();
    }
  }

  if (complex_gap) {
    const auto lambda = ordinary_coefficients(curve);
    const auto idx = embed_ordinary(src, *target);
    DenseMatrix wide(static_cast<std::size_t>(target->dimension()), lambda.cols());
    for (std::size_t k = 0; k < idx.size(); ++k)
      std::copy(lambda.row(k).begin(), lambda.row(k).end(), wide.row(idx[k]).begin());
    return represent_ordinary_curve(std::move(target), wide);
  }

  BCurve current = curve;
  std::vector<CharacteristicZero> zeros = src.polynomial().zeros();
  for (const auto& z : missing) {
    for (int m = 0; m < z.multiplicity; ++m) {
      zeros.push_back({z.re, 0.0, 1});
      auto next_poly = CharacteristicPolynomial::make(zeros);
      SpacePtr next = next_poly.dimension() == target->dimension()
                          ? target
                          : build_space(next_poly, src.alpha(), src.beta(), options);
      current = elevate_order(current, std::move(next));
    }
  }
  return current;
}

std::pair<BCurve, BCurve> subdivide(const BCurve& curve, double gamma, const BuildOptions& options) {
  const ECSpace& s = curve.space();
  if (!(gamma > s.alpha() && gamma < s.beta())) {
    std::ostringstream msg;
    msg << "subdivision parameter " << gamma << " not inside (" << s.alpha() << ", " << s.beta() << ")";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  auto left = build_space(s.polynomial(), s.alpha(), gamma, options);
  auto right = build_space(s.polynomial(), gamma, s.beta(), options);

  const int n = s.order();
  const std::size_t dim = static_cast<std::size_t>(n + 1);
  const std::size_t delta = curve.point_dimension();
  DenseMatrix lam(dim, delta), rho(dim, delta);

  const auto at_gamma = curve.eval(0, gamma);
  std::copy(curve.control_points().row(0).begin(), curve.control_points().row(0).end(), lam.row(0).begin());
  std::copy(at_gamma.begin(), at_gamma.end(), lam.row(dim - 1).begin());
  std::copy(at_gamma.begin(), at_gamma.end(), rho.row(0).begin());
  std::copy(curve.control_points().row(dim - 1).begin(), curve.control_points().row(dim - 1).end(),
            rho.row(dim - 1).begin());

  // Forward recursion from the left end of a child space.
  auto forward = [&](DenseMatrix& out, const ECSpace& child, double x, int count) {
    for (int i = 1; i <= count; ++i) {
      auto row = out.row(static_cast<std::size_t>(i));
      const auto d = curve.eval(i, x);
      std::copy(d.begin(), d.end(), row.begin());
      for (int j = 0; j < i; ++j) add_scaled(row, out.row(static_cast<std::size_t>(j)), -child.b_at_alpha(j, i));
      const double den = child.b_at_alpha(i, i);
      for (double& v : row) v /= den;
    }
  };
  // Backward recursion from the right end of a child space.
  auto backward = [&](DenseMatrix& out, const ECSpace& child, double x, int count) {
    for (int i = 1; i <= count; ++i) {
      auto row = out.row(static_cast<std::size_t>(n - i));
      const auto d = curve.eval(i, x);
      std::copy(d.begin(), d.end(), row.begin());
      for (int j = 0; j < i; ++j)
        add_scaled(row, out.row(static_cast<std::size_t>(n - j)), -child.b_at_beta(n - j, i));
      const double den = child.b_at_beta(n - i, i);
      for (double& v : row) v /= den;
    }
  };

  forward(lam, *left, s.alpha(), (n - 1) / 2);
  backward(lam, *left, gamma, n / 2);
  forward(rho, *right, gamma, n / 2);
  backward(rho, *right, s.beta(), (n - 1) / 2);

  if (!lam.all_finite() || !rho.all_finite()) {
    throw Error(ErrorCode::ZeroDenominator, "subdivision recursion produced non-finite points");
  }
  return {BCurve(std::move(left), std::move(lam)), BCurve(std::move(right), std::move(rho))};
}

BCurve represent_ordinary_curve(SpacePtr space, const DenseMatrix& coefficients) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "space missing");
  const std::size_t dim = static_cast<std::size_t>(space->dimension());
  if (coefficients.rows() != dim || coefficients.cols() == 0) {
    std::ostringstream msg;
    msg << "expected " << dim << " ordinary coefficients, got " << coefficients.rows();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  const auto t = transformation_matrix(*space);
  // p_j = sum_i lambda_i t_{i,j}
  return BCurve(std::move(space), t.transposed() * coefficients);
}

DenseMatrix ordinary_coefficients(const BCurve& curve) {
  // lambda_k = sum_i p_i B[i][k]
  return curve.space().b_coeffs().transposed() * curve.control_points();
}

BCurve interpolate(SpacePtr space, const InterpolationProblem& problem) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "space missing");
  const auto& s = *space;
  const std::size_t dim = static_cast<std::size_t>(s.dimension());
  const std::size_t nk = problem.knots.size();
  if (nk == 0 || problem.multiplicities.size() != nk || problem.data.size() != nk) {
    throw Error(ErrorCode::DimensionMismatch, "knots, multiplicities and data must have equal length");
  }
  const std::size_t delta = problem.data.front().cols();
  std::size_t total = 0;
  for (std::size_t k = 0; k < nk; ++k) {
    if (problem.multiplicities[k] < 1) throw Error(ErrorCode::InvalidArgument, "multiplicity must be positive");
    if (k > 0 && !(problem.knots[k] > problem.knots[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "knots must be strictly increasing");
    }
    if (problem.data[k].rows() != static_cast<std::size_t>(problem.multiplicities[k]) ||
        problem.data[k].cols() != delta) {
      throw Error(ErrorCode::DimensionMismatch, "data block shape does not match multiplicity");
    }
    total += static_cast<std::size_t>(problem.multiplicities[k]);
  }
  if (total != dim) throw Error(ErrorCode::DimensionMismatch, "multiplicities must sum to the space dimension");

  DenseMatrix a(dim, dim), rhs(dim, delta);
  std::size_t row = 0;
  for (std::size_t k = 0; k < nk; ++k) {
    for (int l = 0; l < problem.multiplicities[k]; ++l, ++row) {
      const auto b = s.b_all(l, problem.knots[k]);
      std::copy(b.begin(), b.end(), a.row(row).begin());
      const auto d = problem.data[k].row(static_cast<std::size_t>(l));
      std::copy(d.begin(), d.end(), rhs.row(row).begin());
    }
  }
  try {
    return BCurve(std::move(space), num::solve_pivoted(a, rhs));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Singular) throw Error(ErrorCode::SingularCollocation, e.what());
    throw;
  }
}

SampledCurve sample_curve(const BCurve& curve, int sample_count, int d_max) {
  if (sample_count < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  if (d_max < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  const double a = curve.space().alpha();
  const double b = curve.space().beta();
  SampledCurve out;
  out.parameters.reserve(static_cast<std::size_t>(sample_count));
  out.derivatives.reserve(static_cast<std::size_t>(sample_count));
  for (int s = 0; s < sample_count; ++s) {
    const double u = (s == sample_count - 1) ? b : a + (b - a) * s / (sample_count - 1);
    out.parameters.push_back(u);
    DenseMatrix d(static_cast<std::size_t>(d_max + 1), curve.point_dimension());
    for (int j = 0; j <= d_max; ++j) curve.eval(j, u, d.row(static_cast<std::size_t>(j)));
    out.derivatives.push_back(std::move(d));
  }
  return out;
}

}  // namespace ecbasis
