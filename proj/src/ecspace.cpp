#include "ecbasis/ecspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ecbasis/error.hpp"

namespace ecbasis {

namespace {

void check_stage(const ConditionReport& report, const BuildOptions& options) {
  if (!options.check_conditioning) return;
  if (report.estimated_correct_digits < options.expected_digits) {
    std::ostringstream msg;
    msg << "stage '" << report.stage_label << "' has condition number " << report.condition_number
        << " (about " << report.estimated_correct_digits << " correct digits, "
        << options.expected_digits << " expected); its solution may be inaccurate";
    throw Error(ErrorCode::IllConditioned, msg.str());
  }
}

using num::ExtendedMatrix;

// Scales every row of a and rhs so that the row of a has unit max-magnitude.
void equilibrate_rows(ExtendedMatrix& a, ExtendedMatrix& rhs) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    long double m = 0.0L;
    for (long double v : a.row(r)) m = std::max(m, std::abs(v));
    if (m == 0.0L || !std::isfinite(m)) continue;
    for (long double& v : a.row(r)) v /= m;
    for (long double& v : rhs.row(r)) v /= m;
  }
}

// S with phi_k(u - c) = sum_m S(k, m) phi_m(u).
DenseMatrix shift_matrix(const std::vector<OrdinaryBasisFunction>& basis, double c) {
  const std::size_t dim = basis.size();
  DenseMatrix s(dim, dim);
  auto index_of = [&basis](int power, double a, double b, Phase phase) {
    const OrdinaryBasisFunction key{power, a, b, phase};
    return static_cast<std::size_t>(std::find(basis.begin(), basis.end(), key) - basis.begin());
  };
  for (std::size_t k = 0; k < dim; ++k) {
    const auto& f = basis[k];
    const double cb = std::cos(f.frequency * c), sb = std::sin(f.frequency * c);
    double binom = 1.0;
    for (int p = 0; p <= f.power; ++p) {
      if (p > 0) binom = binom * (f.power - p + 1) / p;
      // (u - c)^r = sum_p C(r,p) u^p (-c)^{r-p}
      const double w = std::exp(-f.exp_rate * c) * binom * std::pow(-c, f.power - p);
      if (f.frequency == 0.0) {
        s(k, index_of(p, f.exp_rate, 0.0, Phase::Cos)) += w;
        continue;
      }
      const std::size_t ic = index_of(p, f.exp_rate, f.frequency, Phase::Cos);
      const std::size_t is = index_of(p, f.exp_rate, f.frequency, Phase::Sin);
      if (f.phase == Phase::Cos) {
        s(k, ic) += w * cb;
        s(k, is) += w * sb;
      } else {
        s(k, is) += w * cb;
        s(k, ic) -= w * sb;
      }
    }
  }
  return s;
}

ConditionReport safe_condition(const DenseMatrix& a, const char* label) {
  try {
    return num::equilibrated_condition(a, label);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    return {std::numeric_limits<double>::infinity(), 0, label};
  }
}

}  // namespace

double ECSpace::ordinary_value(int k, int j, double u) const {
  return ordinary_.at(static_cast<std::size_t>(k)).derivative(j, u);
}

double ECSpace::bicanonical(int i, int j, double u) const {
  return static_cast<double>(combine(rho_ext_, static_cast<std::size_t>(i), j, static_cast<long double>(u) - center_));
}

// Row i of table applied to the j-th derivatives of the ordinary functions at
// shifted parameter t. Carried out in extended precision: the coefficients
// of nearly dependent ordinary functions are large and cancel.
long double ECSpace::combine(const num::ExtendedMatrix& table, std::size_t i, int j, long double t) const {
  long double s = 0.0L;
  for (std::size_t k = 0; k < ordinary_.size(); ++k) s += table(i, k) * ordinary_[k].derivative_extended(j, t);
  return s;
}

double ECSpace::clamp_to_domain(double u) const {
  const double tol = 1e-12 * std::max({1.0, std::abs(alpha_), std::abs(beta_)});
  if (!(u >= alpha_ - tol && u <= beta_ + tol)) {
    std::ostringstream msg;
    msg << "parameter " << u << " outside [" << alpha_ << ", " << beta_ << "]";
    throw Error(ErrorCode::OutOfDomain, msg.str());
  }
  return std::clamp(u, alpha_, beta_);
}

double ECSpace::b_direct(int i, int j, double u) const {
  return static_cast<double>(combine(b_ext_, static_cast<std::size_t>(i), j, static_cast<long double>(u) - center_));
}

double ECSpace::b(int i, int j, double u) const {
  const int n = order();
  if (i < 0 || i > n) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "negative differentiation order");
  u = clamp_to_domain(u);
  if (reflection_invariant_ && i > n / 2) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const long double t = static_cast<long double>(u) - center_;
    return sign * static_cast<double>(combine(b_ext_, static_cast<std::size_t>(n - i), j, -t));
  }
  return b_direct(i, j, u);
}

void ECSpace::b_all(int j, double u, std::span<double> out) const {
  const int n = order();
  const std::size_t dim = ordinary_.size();
  if (out.size() != dim) throw Error(ErrorCode::DimensionMismatch, "output span must have n+1 entries");
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "negative differentiation order");
  u = clamp_to_domain(u);

  // Mirrored functions are evaluated at the reflected parameter, which in
  // the shifted variable is just -t.
  std::vector<long double> phi(dim), phi_reflected;
  const long double t = static_cast<long double>(u) - center_;
  for (std::size_t k = 0; k < dim; ++k) phi[k] = ordinary_[k].derivative_extended(j, t);
  if (reflection_invariant_) {
    phi_reflected.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) phi_reflected[k] = ordinary_[k].derivative_extended(j, -t);
  }
  const long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
  for (int i = 0; i <= n; ++i) {
    const bool mirrored = reflection_invariant_ && i > n / 2;
    const std::size_t row = static_cast<std::size_t>(mirrored ? n - i : i);
    const auto& f = mirrored ? phi_reflected : phi;
    long double s = 0.0L;
    for (std::size_t k = 0; k < dim; ++k) s += b_ext_(row, k) * f[k];
    out[static_cast<std::size_t>(i)] = static_cast<double>(mirrored ? sign * s : s);
  }
}

std::vector<double> ECSpace::b_all(int j, double u) const {
  std::vector<double> out(ordinary_.size());
  b_all(j, u, out);
  return out;
}

std::vector<std::string> ECSpace::latex_ordinary_basis() const {
  std::vector<std::string> out;
  out.reserve(ordinary_.size());
  for (const auto& f : ordinary_) out.push_back(f.latex());
  return out;
}

SpacePtr build_space(const CharacteristicPolynomial& p, double alpha, double beta,
                     const BuildOptions& options) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta - alpha >= options.min_length)) {
    std::ostringstream msg;
    msg << "interval [" << alpha << ", " << beta << "] is empty or shorter than " << options.min_length;
    throw Error(ErrorCode::InvalidInterval, msg.str());
  }
  if (p.multiplicity_of(0.0, 0.0) < 1) {
    throw Error(ErrorCode::MissingZeroRoot, "z = 0 must be a zero of the characteristic polynomial");
  }
  if (p.dimension() < 2) throw Error(ErrorCode::InvalidArgument, "the space needs dimension at least 2");

  auto space = std::shared_ptr<ECSpace>(new ECSpace());
  ECSpace& s = *space;
  s.polynomial_ = p;
  s.alpha_ = alpha;
  s.beta_ = beta;
  s.reflection_invariant_ = p.reflection_invariant();
  s.ordinary_ = p.ordinary_basis();

  const int n = p.order();
  const std::size_t dim = static_cast<std::size_t>(n + 1);

  s.center_ = 0.5 * (alpha + beta);

  s.phi_alpha_ = DenseMatrix(dim, dim);
  s.phi_beta_ = DenseMatrix(dim, dim);
  ExtendedMatrix local_alpha(dim, dim), local_beta(dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& f = s.ordinary_[k];
      const int jj = static_cast<int>(j);
      s.phi_alpha_(j, k) = f.derivative(jj, alpha);
      s.phi_beta_(j, k) = f.derivative(jj, beta);
      local_alpha(j, k) = f.derivative_extended(jj, static_cast<long double>(alpha) - s.center_);
      local_beta(j, k) = f.derivative_extended(jj, static_cast<long double>(beta) - s.center_);
    }

  // The endpoint systems are carried out in extended precision: the
  // normalization below is a triangular solve whose terms cancel heavily
  // when the ordinary functions differ in magnitude across the interval.

  // Bicanonical functions: v_i has a zero of order i at alpha with
  // v_i^{(i)}(alpha) = 1 and a zero of order n - i at beta.
  ExtendedMatrix rho_ext(dim, dim);
  ConditionReport worst{1.0, 0, kStageBicanonical};
  bool first = true;
  for (std::size_t i = 0; i < dim; ++i) {
    ExtendedMatrix a(dim, dim), rhs(dim, 1);
    std::size_t row = 0;
    for (std::size_t j = 0; j <= i; ++j, ++row) {
      for (std::size_t k = 0; k < dim; ++k) a(row, k) = local_alpha(j, k);
      rhs(row, 0) = (j == i) ? 1.0L : 0.0L;
    }
    for (std::size_t j = 0; j + i + 1 <= static_cast<std::size_t>(n); ++j, ++row)
      for (std::size_t k = 0; k < dim; ++k) a(row, k) = local_beta(j, k);
    equilibrate_rows(a, rhs);
    auto report = safe_condition(a.cast<double>(), kStageBicanonical);
    if (first || report.condition_number > worst.condition_number) worst = report;
    first = false;
    const auto x = num::solve_with(num::lu_pivoted(a), rhs);
    for (std::size_t k = 0; k < dim; ++k) rho_ext(i, k) = x(k, 0);
  }
  s.rho_local_ = rho_ext.cast<double>();
  s.rho_ext_ = rho_ext;
  s.reports_.push_back(worst);
  check_stage(worst, options);

  // Reversed Wronskian at beta: rows are derivative orders, column c holds
  // v_{n-c}. The row scaling D is factored out again below, so
  // W = (D^{-1} L' D)(D^{-1} U') is the Doolittle factorization of W itself.
  ExtendedMatrix ws(dim, dim), row_scale(dim, 1);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t c = 0; c < dim; ++c) {
      const std::size_t i = dim - 1 - c;
      long double v = 0.0L;
      for (std::size_t k = 0; k < dim; ++k) v += rho_ext(i, k) * local_beta(j, k);
      ws(j, c) = v;
    }
  for (std::size_t j = 0; j < dim; ++j) row_scale(j, 0) = 1.0L;
  equilibrate_rows(ws, row_scale);
  auto wreport = safe_condition(ws.cast<double>(), kStageWronskian);
  s.reports_.push_back(wreport);
  check_stage(wreport, options);

  const auto lu = num::lu_unpivoted(ws);
  auto lreport = safe_condition(lu.lower.cast<double>(), kStageLower);
  s.reports_.push_back(lreport);
  check_stage(lreport, options);
  auto ureport = safe_condition(lu.upper.cast<double>(), kStageUpper);
  s.reports_.push_back(ureport);
  check_stage(ureport, options);

  const auto linv_scaled = num::invert_triangular(lu.lower, num::Orientation::Lower);
  const auto uinv_scaled = num::invert_triangular(lu.upper, num::Orientation::Upper);

  // With D = diag(row_scale): U^{-1} = U'^{-1} D and L^{-1} e_0 = D^{-1} L'^{-1} D e_0.
  ExtendedMatrix mu(dim, dim);
  std::vector<long double> lambda(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c) mu(r, c) = uinv_scaled(r, c) * row_scale(c, 0);
  for (std::size_t i = 0; i < dim; ++i) lambda[i] = linv_scaled(i, 0) * row_scale(0, 0) / row_scale(i, 0);
  s.mu_ = mu.cast<double>();
  s.lambda_col_.assign(lambda.begin(), lambda.end());

  // b_{n,n-i} = lambda_{i,0} sum_{r<=i} mu_{r,i} v_{n-r}.
  ExtendedMatrix b_ext(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t target = dim - 1 - i;
    for (std::size_t r = 0; r <= i; ++r) {
      const long double f = lambda[i] * mu(r, i);
      for (std::size_t k = 0; k < dim; ++k) b_ext(target, k) += f * rho_ext(dim - 1 - r, k);
    }
  }
  s.b_local_ = b_ext.cast<double>();
  s.b_ext_ = b_ext;
  const auto shift = shift_matrix(s.ordinary_, s.center_);
  s.rho_ = s.rho_local_ * shift;
  s.b_coeffs_ = s.b_local_ * shift;
  if (!s.b_local_.all_finite() || !s.b_coeffs_.all_finite()) {
    throw Error(ErrorCode::IllConditioned, "B-basis coefficients are not finite; shorten the interval");
  }

  s.b_alpha_ = DenseMatrix(dim, dim);
  s.b_beta_ = DenseMatrix(dim, dim);
  std::vector<double> tmp(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    s.b_all(static_cast<int>(j), alpha, tmp);
    for (std::size_t i = 0; i < dim; ++i) s.b_alpha_(j, i) = tmp[i];
    s.b_all(static_cast<int>(j), beta, tmp);
    for (std::size_t i = 0; i < dim; ++i) s.b_beta_(j, i) = tmp[i];
  }
  return space;
}

DenseMatrix alternative_b_coefficients(const ECSpace& space) {
  const std::size_t dim = static_cast<std::size_t>(space.dimension());
  const double alpha = space.alpha();
  std::vector<double> c(dim, 0.0);
  c[0] = 1.0;
  for (std::size_t i = 1; i < dim; ++i) {
    double s = 0.0;
    for (std::size_t r = 0; r < i; ++r) s += c[r] * space.bicanonical(static_cast<int>(r), static_cast<int>(i), alpha);
    c[i] = -s;
  }
  DenseMatrix out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) out(i, k) = c[i] * space.rho()(i, k);
  return out;
}

DenseMatrix transformation_matrix(const ECSpace& space, std::int64_t* flops) {
  const int n = space.order();
  const std::size_t dim = static_cast<std::size_t>(n + 1);
  DenseMatrix t(dim, dim);
  std::int64_t count = 0;

  for (std::size_t j = 0; j < dim; ++j) t(0, j) = 1.0;
  for (std::size_t i = 1; i < dim; ++i) {
    t(i, 0) = space.phi_at_alpha(static_cast<int>(i), 0);
    t(i, dim - 1) = space.phi_at_beta(static_cast<int>(i), 0);
  }

  const double tiny = 1e-300;
  for (int j = 1; j <= n / 2; ++j) {
    const double den = space.b_at_alpha(j, j);
    if (!(std::abs(den) > tiny)) throw Error(ErrorCode::ZeroDenominator, "b_j^{(j)}(alpha) vanished");
    for (int i = 1; i <= n; ++i) {
      double v = space.phi_at_alpha(i, j);
      for (int k = 0; k < j; ++k) {
        v -= t(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) * space.b_at_alpha(k, j);
        count += 2;
      }
      t(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v / den;
      count += 1;
    }
  }
  for (int j = 1; j <= (n - 1) / 2; ++j) {
    const double den = space.b_at_beta(n - j, j);
    if (!(std::abs(den) > tiny)) throw Error(ErrorCode::ZeroDenominator, "b_{n-j}^{(j)}(beta) vanished");
    for (int i = 1; i <= n; ++i) {
      double v = space.phi_at_beta(i, j);
      for (int k = 0; k < j; ++k) {
        v -= t(static_cast<std::size_t>(i), static_cast<std::size_t>(n - k)) * space.b_at_beta(n - k, j);
        count += 2;
      }
      t(static_cast<std::size_t>(i), static_cast<std::size_t>(n - j)) = v / den;
      count += 1;
    }
  }
  if (flops) *flops = count;
  return t;
}

std::int64_t transformation_flop_count(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
  if (n <= 1) return 0;
  const std::int64_t k = n / 2;
  if (n % 2 == 0) return n * k * (k + 5);
  return n * (k * k + 4 * k - 2);
}

double kappa_lu(int n, int delta) {
  const double m = n + 1.0;
  return 2.0 / 3.0 * m * m * m - 0.5 * m * m - m / 6.0 + (2.0 * m * m - m) * delta;
}

}  // namespace ecbasis
