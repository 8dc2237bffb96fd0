// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "npdcat/design.hpp"
#include "npdcat/model.hpp"
#include "npdcat/stattests.hpp"

namespace npdcat {

// One power-study cell: data generated under `generating`, tests calibrated
// under `tested`.
struct Scenario {
  std::string id;
  std::string family;   // "parameter" or "structural"
  std::string axis;     // varied parameter name, or "shape"
  std::string generating_label;
  std::string tested_label;
  ModelSpec generating;
  ModelSpec tested;
  std::size_t n_subjects = 0;
  std::vector<double> times;
  std::size_t replicates = 200;  // B
  std::size_t mc_count = 1000;   // V
};

struct PowerResult {
  std::string scenario_id;
  std::string family;
  std::string axis;
  std::string generating_label;
  std::string tested_label;
  std::size_t n_subjects = 0;
  std::size_t replicates = 0;
  double power_npd = 0.0;
  double se_npd = 0.0;
  double power_chi2 = 0.0;
  double se_chi2 = 0.0;
  double power_npd_stratified = 0.0;
  double se_npd_stratified = 0.0;
};

// The base binary model: logit P(Y=1) = th1 + (th2 + beta*trt) t with
// th1 ~ N(-2, 0.7^2), th2 ~ N(0.09, 0.17^2), beta = 0.45.
ModelSpec base_parameter_model();

// The four canonical structural models (linear, loglinear, quadratic,
// exponential) sharing the mean logit at t = 0 and t = 12 in both arms.
std::vector<ModelSpec> structural_models();

// Default study settings: visits {0,2,11,12}, N in {50,100,274}, B=200,
// V=1000. A scale factor in (0,1] shrinks B and V proportionally.
struct StudySettings {
  std::vector<std::size_t> sample_sizes{50, 100, 274};
  std::vector<double> times{0.0, 2.0, 11.0, 12.0};
  std::size_t replicates = 200;
  std::size_t mc_count = 1000;

  StudySettings scaled(double factor) const;
};

// One parameter varied at a time over the five published values, each value
// used both to generate and to test: 125 scenarios per sample size, 25 of
// them with the tested model equal to the generating model.
std::vector<Scenario> build_parameter_grid(const StudySettings& s = {});

// All generator x tested pairs of the four structural models: 16 scenarios
// per sample size, 4 of them null.
std::vector<Scenario> build_structural_grid(const StudySettings& s = {});

// Runs scenarios with calibration bundles cached per (tested model, design).
class ScenarioRunner {
 public:
  explicit ScenarioRunner(std::uint64_t master_seed, unsigned n_threads = 1)
      : master_seed_(master_seed), n_threads_(n_threads) {}

  PowerResult run(const Scenario& scenario);
  std::vector<PowerResult> run_all(const std::vector<Scenario>& scenarios);

  const CalibrationBundle& bundle_for(const ModelSpec& tested, const Design& design,
                                      std::size_t b, std::size_t v);

 private:
  std::uint64_t master_seed_;
  unsigned n_threads_;
  std::map<std::string, CalibrationBundle> bundles_;
};

// Derived master seed for a calibration bundle (shared by every scenario
// testing the same model on the same design).
std::uint64_t calibration_seed(std::uint64_t master_seed, const ModelSpec& tested,
                               const Design& design, std::size_t b, std::size_t v);

// Derived master seed for evaluation replicates (shared by scenarios with
// the same generating model and design, disjoint from calibration streams).
std::uint64_t evaluation_seed(std::uint64_t master_seed, const ModelSpec& generating,
                              const Design& design);

}  // namespace npdcat
