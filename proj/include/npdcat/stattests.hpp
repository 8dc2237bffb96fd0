// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npdcat/dataset.hpp"
#include "npdcat/design.hpp"
#include "npdcat/marginal.hpp"
#include "npdcat/npd.hpp"

namespace npdcat {

struct KsResult {
  double statistic = 0.0;  // sup |empirical CDF - Phi|, in [0,1]
  std::size_t n = 0;
};

// One-sample Kolmogorov-Smirnov statistic against N(0,1), computed exactly
// from order statistics.
KsResult ks_statistic(std::span<const double> values);
KsResult ks_statistic(const NpdVector& npd);

// B test statistics simulated under H0 with their empirical threshold.
struct NullDistribution {
  std::vector<double> statistics;  // sorted ascending
  double threshold = 0.0;          // (1 - alpha) empirical percentile
  double alpha = 0.05;
  std::size_t n = 0;               // observation count of the calibrated design
  std::uint64_t model_hash = 0;
  std::uint64_t design_hash = 0;
  std::uint64_t master_seed = 0;
  std::size_t mc_count = 0;        // V used for the marginal CDF

  std::size_t replicate_count() const { return statistics.size(); }
  // Fraction of null statistics >= observed, with the +1 correction that
  // never returns zero.
  double empirical_p(double observed) const;
};

// Order-statistic threshold: the (B - floor(alpha*B))-th smallest value, so
// that exactly floor(alpha*B) distinct statistics exceed it.
double empirical_threshold(std::span<const double> sorted, double alpha);

// One stratum: a visit time crossed with one covariate combination.
struct Stratum {
  double time = 0.0;
  Covariates covariates;
  std::string label;
};

// Visits x covariate combinations, with the Bonferroni level split.
struct StratumPlan {
  std::vector<Stratum> strata;
  std::vector<std::string> covariate_names;
  std::size_t n_visits = 0;
  std::size_t n_covariate_combos = 0;
  double alpha = 0.05;

  double alpha_per_stratum() const {
    return alpha / static_cast<double>(strata.size());
  }
  // Projection of full observation covariates onto the plan's variables.
  Covariates reduce(const Covariates& cov) const;
  // Index of the stratum an observation falls into.
  std::size_t stratum_of(double time, const Covariates& cov) const;

  // Builds the plan from the distinct visit times and the combinations of
  // the named covariates present in the design ("trt" or extra covariates).
  static StratumPlan from_design(const Design& design,
                                 const std::vector<std::string>& covariate_names,
                                 double alpha = 0.05);
};

struct StratumTestDetail {
  std::string label;
  double statistic = 0.0;
  double threshold = 0.0;
  double empirical_p = 1.0;
  std::size_t n_obs = 0;
  bool reject = false;
};

struct TestDecision {
  std::string test_name;
  bool reject = false;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double empirical_p = std::numeric_limits<double>::quiet_NaN();
  std::vector<StratumTestDetail> strata;
  std::vector<std::string> warnings;
};

// Everything calibration produces for one (model, design, B, V, seed):
// the shared marginal CDF, the global KS null, and (when a plan is given)
// per-stratum KS and Chi-square nulls at the Bonferroni level.
struct CalibrationBundle {
  MarginalCdf cdf;
  NullDistribution global_ks;
  std::optional<StratumPlan> plan;
  std::vector<NullDistribution> stratum_ks;
  std::vector<NullDistribution> stratum_chi2;
  std::vector<double> expected_counts;  // strata x K expected category counts
  std::size_t replicate_count = 0;
};

// Simulates B datasets under the model, computes the npd KS statistic (and
// per-stratum KS / Chi-square statistics when a plan is given) for each, and
// stores thresholds. Deterministic given master_seed; replicates run in
// parallel.
CalibrationBundle calibrate_bundle(const ModelSpec& model, const Design& design,
                                   std::size_t b, std::size_t v,
                                   std::uint64_t master_seed,
                                   const std::optional<StratumPlan>& plan = {},
                                   unsigned n_threads = 1);

// Spec operation: the global KS null distribution only.
NullDistribution calibrate_null(const ModelSpec& model, const Design& design,
                                std::size_t b, std::size_t v,
                                std::uint64_t master_seed,
                                unsigned n_threads = 1);

// Corrected decision rule: reject iff the statistic exceeds the simulated
// threshold. observed.n must match the calibration design.
TestDecision corrected_ks_test(const KsResult& observed,
                               const NullDistribution& null_dist);

// Stratified Pearson Chi-square with simulated per-stratum thresholds at the
// Bonferroni level. Requires a balanced design (all subjects share the visit
// schedule); otherwise throws InapplicableError.
TestDecision chi_square_stratified(const Dataset& data, const ModelSpec& model,
                                   const StratumPlan& plan, std::size_t b,
                                   std::size_t v, std::uint64_t master_seed,
                                   unsigned n_threads = 1);

// Same test evaluated against an existing calibration bundle.
TestDecision chi_square_stratified(const Dataset& data, const ModelSpec& model,
                                   const CalibrationBundle& bundle);

// Per-stratum KS tests of the npd with Bonferroni-calibrated thresholds.
TestDecision stratified_npd_test(const NpdVector& npd, const StratumPlan& plan,
                                 const std::vector<NullDistribution>& nulls,
                                 double alpha = 0.05);

// Per-stratum Pearson statistics for a dataset against expected counts
// (strata-major, K values per stratum).
std::vector<double> stratum_chi2_statistics(const Dataset& data,
                                            const StratumPlan& plan,
                                            std::size_t n_categories,
                                            std::span<const double> expected);

// Expected per-stratum category counts from a marginal CDF.
std::vector<double> stratum_expected_counts(const Design& design,
                                            const MarginalCdf& cdf,
                                            const StratumPlan& plan);

}  // namespace npdcat
