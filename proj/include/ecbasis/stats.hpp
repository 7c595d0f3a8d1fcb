#pragma once

#include <span>

namespace ecbasis {

// Two-sided Student-t interval for the mean of the samples at significance s,
// clamped at zero from below (samples are durations).
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

ConfidenceInterval confidence_interval(std::span<const double> samples, double significance);

// Quantile of Student's t distribution with dof degrees of freedom.
double t_quantile(double p, double dof);

}  // namespace ecbasis
