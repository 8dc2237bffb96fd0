// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "npdcat/design.hpp"
#include "npdcat/model.hpp"

namespace npdcat {

// Monte Carlo estimate of the marginal predictive CDF F_ij(c_l) for every
// observation in a design: the conditional cumulative probabilities averaged
// over V parameter draws per subject (the smoothed estimator).
class MarginalCdf {
 public:
  MarginalCdf(std::size_t n_observations, std::size_t n_categories, std::size_t v);

  std::size_t n_observations() const { return n_obs_; }
  std::size_t n_categories() const { return k_; }
  std::size_t mc_count() const { return v_; }
  bool low_draw_warning() const { return v_ < 1000; }

  // F(c_0)..F(c_{K-1}) for one observation; F(c_{K-1}) == 1.
  std::span<const double> values(std::size_t obs) const {
    return {f_.data() + obs * k_, k_};
  }
  // Monte Carlo standard error of each value.
  std::span<const double> standard_errors(std::size_t obs) const {
    return {se_.data() + obs * k_, k_};
  }

  double value(std::size_t obs, std::size_t category) const {
    return f_[obs * k_ + category];
  }
  double standard_error(std::size_t obs, std::size_t category) const {
    return se_[obs * k_ + category];
  }

  std::span<double> mutable_values(std::size_t obs) {
    return {f_.data() + obs * k_, k_};
  }
  std::span<double> mutable_errors(std::size_t obs) {
    return {se_.data() + obs * k_, k_};
  }

 private:
  std::size_t n_obs_;
  std::size_t k_;
  std::size_t v_;
  std::vector<double> f_;
  std::vector<double> se_;
};

// Estimates the marginal CDF with V parameter draws per subject.
// Deterministic given master_seed; subjects are independent substreams.
MarginalCdf estimate_marginal_cdf(const ModelSpec& model, const Design& design,
                                  std::size_t v, std::uint64_t master_seed,
                                  unsigned n_threads = 1);

}  // namespace npdcat
