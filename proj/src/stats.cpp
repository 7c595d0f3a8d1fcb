#include "ecbasis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "ecbasis/error.hpp"

namespace ecbasis {

double t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0) || !(dof > 0.0)) throw Error(ErrorCode::InvalidArgument, "t quantile needs p in (0,1), dof > 0");
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

ConfidenceInterval confidence_interval(std::span<const double> samples, double significance) {
  if (samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "confidence interval needs at least two samples");
  if (!(significance > 0.0 && significance < 1.0))
    throw Error(ErrorCode::InvalidArgument, "significance must lie in (0,1)");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1));
  const double half = sd / std::sqrt(n) * t_quantile(1.0 - significance / 2, n - 1);
  return {std::max(mean - half, 0.0), mean + half, mean, sd, static_cast<int>(samples.size())};
}

}  // namespace ecbasis
