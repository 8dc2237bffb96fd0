// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npdcat/dataset.hpp"
#include "npdcat/marginal.hpp"
#include "npdcat/rng.hpp"

namespace npdcat {

// One jittered prediction discrepancy with its observation metadata.
struct NpdEntry {
  std::size_t obs_index = 0;
  std::string subject_id;
  double time = 0.0;
  Covariates covariates;
  std::size_t category = 0;
  double f_lower = 0.0;  // F(c_{l-1}), with F(c_0) == 0
  double f_upper = 1.0;  // F(c_l)
  double pd = 0.5;       // uniform draw in (f_lower, f_upper)
  double npd = 0.0;      // normal_quantile(pd clamped to [eps, 1-eps])
};

// Observation whose predicted category probability is exactly zero; direct
// evidence of misspecification, reported rather than jittered.
struct DegenerateObservation {
  std::size_t obs_index = 0;
  std::string subject_id;
  double time = 0.0;
  std::size_t category = 0;
};

struct NpdVector {
  std::vector<NpdEntry> entries;
  std::vector<DegenerateObservation> degenerate;
  std::size_t mc_count = 0;  // V used for the marginal CDF
  double epsilon = 0.0;      // pd clamp applied before the normal quantile

  std::vector<double> npd_values() const;
  std::vector<double> pd_values() const;
};

// Uniform draw on the open interval (F_lower, F_upper).
// Throws ArgumentError on invalid bounds and InapplicableError when the
// interval is degenerate (F_lower >= F_upper).
double sample_pd(double f_lower, double f_upper, Stream& stream);
double sample_pd(double f_lower, double f_upper, const SeedSpec& seed);

// Normalized prediction discrepancies for a dataset under a model:
// estimates the marginal CDF with V draws, jitters each observation within
// its predicted cumulative interval, and applies the inverse-normal
// transform. The jitter streams are independent of the simulation and CDF
// streams, keyed by observation index.
NpdVector compute_npd(const Dataset& data, const ModelSpec& model, std::size_t v,
                      std::uint64_t master_seed, unsigned n_threads = 1);

// Same, but with a caller-supplied marginal CDF (shared between calibration
// replicates and the evaluated data) and an explicit jitter substream.
NpdVector compute_npd(const Dataset& data, const ModelSpec& model,
                      const MarginalCdf& cdf, std::uint64_t master_seed,
                      std::uint64_t jitter_replicate = 0,
                      StreamPurpose jitter_purpose = StreamPurpose::jitter);

}  // namespace npdcat
