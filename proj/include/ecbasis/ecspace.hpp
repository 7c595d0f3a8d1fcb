#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecbasis/numkernel.hpp"
#include "ecbasis/polynomial.hpp"

namespace ecbasis {

using num::ConditionReport;
using num::DenseMatrix;

struct BuildOptions {
  bool check_conditioning = false;
  int expected_digits = 0;
  // Shortest interval accepted; very short intervals make the endpoint
  // systems numerically indistinguishable.
  double min_length = 1e-6;
};

class ECSpace;
using SpacePtr = std::shared_ptr<const ECSpace>;

// Immutable EC space on [alpha, beta] with its normalized B-basis expressed in
// the ordinary basis. Build through build_space().
class ECSpace {
 public:
  const CharacteristicPolynomial& polynomial() const noexcept { return polynomial_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  int order() const noexcept { return polynomial_.order(); }
  int dimension() const noexcept { return polynomial_.dimension(); }
  bool reflection_invariant() const noexcept { return reflection_invariant_; }

  const std::vector<OrdinaryBasisFunction>& ordinary() const noexcept { return ordinary_; }

  // The tables are built and evaluated in the shifted variable u - center()
  // (the interval midpoint), which spans the same space but keeps the
  // coefficients well scaled on intervals far from the origin. The accessors
  // below convert back to the unshifted ordinary basis.
  double center() const noexcept { return center_; }
  // Same tables with respect to phi_{n,k}(u - center()).
  const DenseMatrix& local_rho() const noexcept { return rho_local_; }
  const DenseMatrix& local_b_coeffs() const noexcept { return b_local_; }

  // Row i: bicanonical v_{n,i} in ordinary coordinates.
  const DenseMatrix& rho() const noexcept { return rho_; }
  // U^{-1} of the reversed Wronskian factorization.
  const DenseMatrix& mu() const noexcept { return mu_; }
  // First column of L^{-1}.
  const std::vector<double>& lambda_col() const noexcept { return lambda_col_; }
  // Row i: b_{n,i} in ordinary coordinates.
  const DenseMatrix& b_coeffs() const noexcept { return b_coeffs_; }
  const std::vector<ConditionReport>& condition_reports() const noexcept { return reports_; }

  // Derivatives of the ordinary and bicanonical functions (no domain check).
  double ordinary_value(int k, int j, double u) const;
  double bicanonical(int i, int j, double u) const;

  // b_{n,i}^{(j)}(u); throws OutOfDomain outside [alpha, beta].
  double b(int i, int j, double u) const;
  // All b_{n,i}^{(j)}(u), i = 0..n, into out (size n+1).
  void b_all(int j, double u, std::span<double> out) const;
  std::vector<double> b_all(int j, double u) const;

  // Endpoint lookup tables, orders 0..n.
  double phi_at_alpha(int k, int j) const { return phi_alpha_(j, k); }
  double phi_at_beta(int k, int j) const { return phi_beta_(j, k); }
  double b_at_alpha(int i, int j) const { return b_alpha_(j, i); }
  double b_at_beta(int i, int j) const { return b_beta_(j, i); }

  std::vector<std::string> latex_ordinary_basis() const;

 private:
  friend SpacePtr build_space(const CharacteristicPolynomial&, double, double, const BuildOptions&);

  double clamp_to_domain(double u) const;
  double b_direct(int i, int j, double u) const;
  long double combine(const num::ExtendedMatrix& table, std::size_t i, int j, long double t) const;

  CharacteristicPolynomial polynomial_;
  double alpha_ = 0.0;
  double beta_ = 1.0;
  bool reflection_invariant_ = false;
  std::vector<OrdinaryBasisFunction> ordinary_;
  double center_ = 0.0;
  DenseMatrix rho_local_, b_local_;
  num::ExtendedMatrix rho_ext_, b_ext_;
  DenseMatrix rho_;
  DenseMatrix mu_;
  std::vector<double> lambda_col_;
  DenseMatrix b_coeffs_;
  std::vector<ConditionReport> reports_;
  DenseMatrix phi_alpha_, phi_beta_;
  DenseMatrix b_alpha_, b_beta_;
};

// Stage labels carried by condition reports and IllConditioned errors.
inline constexpr const char* kStageBicanonical = "bicanonical systems";
inline constexpr const char* kStageWronskian = "reversed Wronskian";
inline constexpr const char* kStageLower = "lower factor";
inline constexpr const char* kStageUpper = "upper factor";

SpacePtr build_space(const CharacteristicPolynomial& p, double alpha, double beta,
                     const BuildOptions& options = {});

// B-basis obtained by scaling each bicanonical function so that the sum of the
// scaled functions has vanishing derivatives at alpha. Rows as in b_coeffs().
DenseMatrix alternative_b_coefficients(const ECSpace& space);

// Matrix T with phi_{n,i} = sum_j t_{i,j} b_{n,j}. When flops is given it
// receives the number of floating point operations spent in the recursions.
DenseMatrix transformation_matrix(const ECSpace& space, std::int64_t* flops = nullptr);

// Closed-form operation count of the recursive transformation, as published.
std::int64_t transformation_flop_count(int n);

// Cost of obtaining the same matrix by LU-solving for delta right-hand sides.
double kappa_lu(int n, int delta);

struct CriticalLengthOptions {
  std::optional<double> search_cap;  // default 8(|alpha|+1)
  std::optional<double> grid_step;   // default search_cap / 4096
};

inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

double critical_length(const CharacteristicPolynomial& p, double alpha,
                       const CriticalLengthOptions& options = {});

// Critical length of the derivative space (one factor z removed).
double critical_length_for_design(const CharacteristicPolynomial& p, double alpha,
                                  const CriticalLengthOptions& options = {});

}  // namespace ecbasis
