// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npdcat/model.hpp"

namespace npdcat {

struct SubjectDesign {
  std::string id;
  Covariates covariates;
  std::vector<double> times;  // strictly increasing
};

// Observation schedule and covariates for a study population.
class Design {
 public:
  Design() = default;
  explicit Design(std::vector<SubjectDesign> subjects);

  const std::vector<SubjectDesign>& subjects() const { return subjects_; }
  std::size_t n_subjects() const { return subjects_.size(); }
  std::size_t n_observations() const { return n_obs_; }

  // True when every subject shares one visit-time vector (the stratified
  // Chi-square validity condition).
  bool is_balanced() const;

  std::uint64_t hash() const;

  // N subjects observed at the given times, the second half assigned trt=1.
  static Design balanced_two_arm(std::size_t n, std::vector<double> times);

 private:
  std::vector<SubjectDesign> subjects_;
  std::size_t n_obs_ = 0;
};

}  // namespace npdcat
