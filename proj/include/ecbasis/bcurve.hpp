#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ecbasis/ecspace.hpp"

namespace ecbasis {

// B-curve over an EC space. Control points are the rows of an
// (n+1) x delta matrix.
class BCurve {
 public:
  BCurve(SpacePtr space, DenseMatrix control_points);

  const ECSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const DenseMatrix& control_points() const noexcept { return control_; }
  std::size_t point_dimension() const noexcept { return control_.cols(); }

  // j-th derivative at u; throws OutOfDomain outside the space's interval.
  std::vector<double> eval(int j, double u) const;
  void eval(int j, double u, std::span<double> out) const;

 private:
  SpacePtr space_;
  DenseMatrix control_;
};

// One-step elevation into a space with exactly one more dimension.
BCurve elevate_order(const BCurve& curve, SpacePtr target);

// Elevation across any nested pair of spaces. Real-zero increments are taken
// one dimension at a time through intermediate spaces; increments involving
// conjugate pairs, which admit no intermediate solution space, are handled by
// re-expressing the curve in the target's ordinary basis.
BCurve elevate_to(const BCurve& curve, SpacePtr target, const BuildOptions& options = {});

// Splits at gamma; both halves live on freshly built spaces with the same
// characteristic polynomial.
std::pair<BCurve, BCurve> subdivide(const BCurve& curve, double gamma, const BuildOptions& options = {});

// Curve sum_i lambda_i phi_{n,i}; row i of coefficients is lambda_i.
BCurve represent_ordinary_curve(SpacePtr space, const DenseMatrix& coefficients);

// Ordinary-basis coefficients of a B-curve (inverse of the above).
DenseMatrix ordinary_coefficients(const BCurve& curve);

struct InterpolationProblem {
  std::vector<double> knots;         // strictly increasing, inside [alpha, beta]
  std::vector<int> multiplicities;   // sum = n + 1
  std::vector<DenseMatrix> data;     // data[k]: multiplicities[k] x delta, row l = l-th derivative
};

BCurve interpolate(SpacePtr space, const InterpolationProblem& problem);

struct SampledCurve {
  std::vector<double> parameters;
  std::vector<DenseMatrix> derivatives;  // per sample: (d_max + 1) x delta
};

SampledCurve sample_curve(const BCurve& curve, int sample_count, int d_max);

}  // namespace ecbasis
