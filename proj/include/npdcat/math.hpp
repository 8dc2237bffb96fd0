// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace npdcat {

inline double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Standard normal CDF via erfc; accurate in both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

// Inverse standard normal CDF (Wichura's AS241, PPND16).
// Relative accuracy about 1e-15 over (0,1); returns +/-inf at the endpoints.
double normal_quantile(double p);

// Type-7 (linear interpolation) sample quantile of pre-sorted values.
double quantile_sorted(std::span<const double> sorted, double prob);

// Convenience: copies, sorts and interpolates.
double quantile(std::vector<double> values, double prob);

double mean(std::span<const double> values);
double sample_sd(std::span<const double> values);

}  // namespace npdcat
