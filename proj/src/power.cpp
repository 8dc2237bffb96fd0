// SPDX-License-Identifier: Apache-2.0
#include "npdcat/power.hpp"

#include <cmath>
#include <sstream>

#include "npdcat/errors.hpp"
#include "npdcat/parallel.hpp"
#include "npdcat/simulate.hpp"

namespace npdcat {

ModelSpec base_parameter_model() {
  ModelSpec m;
  m.categories = CategorySpace::binary01();
  m.shape.kind = ShapeKind::linear;
  m.mu1 = -2.0;
  m.mu2 = 0.09;
  m.beta = 0.45;
  m.omega1 = 0.7;
  m.omega2 = 0.17;
  m.id = "M1";
  return m;
}

std::vector<ModelSpec> structural_models() {
  std::vector<ModelSpec> models(4, base_parameter_model());

  models[1].shape.kind = ShapeKind::loglinear;
  models[1].mu2 = 0.42;
  models[1].beta = 2.1;
  models[1].omega2 = 0.79;
  models[1].id = "M2";

  models[2].shape.kind = ShapeKind::quadratic;
  models[2].mu2 = 7.5e-3;
  models[2].beta = 0.0375;
  models[2].omega2 = 1.41e-2;
  models[2].id = "M3";

  models[3].shape.kind = ShapeKind::exponential;
  models[3].mu2 = 2.01e-2;
  models[3].beta = 0.1005;
  models[3].omega2 = 3.79e-2;
  // Rate chosen so the exponential curve reproduces the linear model's mean
  // logit at t = 0 and t = 12 in both arms: exp(12r) - 1 = 1.08 / mu2.
  models[3].shape.rate = std::log(1.0 + 1.08 / 2.01e-2) / 12.0;
  models[3].id = "M4";

  return models;
}

StudySettings StudySettings::scaled(double factor) const {
  if (factor <= 0.0 || factor > 1.0) {
    throw ArgumentError("scale factor must lie in (0, 1]");
  }
  StudySettings out = *this;
  out.replicates = std::max<std::size_t>(
      100, static_cast<std::size_t>(std::lround(factor * replicates)));
  out.mc_count = std::max<std::size_t>(
      100, static_cast<std::size_t>(std::lround(factor * mc_count)));
  return out;
}

namespace {

std::string format_value(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

Scenario make_scenario(std::string family, std::string axis, ModelSpec generating,
                       ModelSpec tested, std::string gen_label,
                       std::string test_label, std::size_t n,
                       const StudySettings& s) {
  Scenario sc;
  sc.family = std::move(family);
  sc.axis = std::move(axis);
  sc.generating_label = std::move(gen_label);
  sc.tested_label = std::move(test_label);
  sc.generating = std::move(generating);
  sc.tested = std::move(tested);
  sc.n_subjects = n;
  sc.times = s.times;
  sc.replicates = s.replicates;
  sc.mc_count = s.mc_count;
  std::ostringstream id;
  id << sc.family << ":" << sc.axis << ":gen=" << sc.generating_label
     << ":test=" << sc.tested_label << ":N=" << n;
  sc.id = id.str();
  return sc;
}

}  // namespace

std::vector<Scenario> build_parameter_grid(const StudySettings& s) {
  struct Axis {
    const char* name;
    std::vector<double> values;
    void (*apply)(ModelSpec&, double);
  };
  const std::vector<Axis> axes{
      {"mu1", {-4.0, -3.0, -2.0, -1.0, 0.0},
       [](ModelSpec& m, double v) { m.mu1 = v; }},
      {"mu2", {-0.3, -0.09, 0.0, 0.09, 0.3},
       [](ModelSpec& m, double v) { m.mu2 = v; }},
      {"beta", {0.0, 0.3, 0.45, 0.7, 1.0},
       [](ModelSpec& m, double v) { m.beta = v; }},
      {"omega1", {0.17, 0.3, 0.5, 0.7, 1.0},
       [](ModelSpec& m, double v) { m.omega1 = v; }},
      {"omega2", {0.1, 0.17, 0.3, 0.5, 0.7},
       [](ModelSpec& m, double v) { m.omega2 = v; }},
  };
  std::vector<Scenario> scenarios;
  const ModelSpec base = base_parameter_model();
  for (std::size_t n : s.sample_sizes) {
    for (const auto& axis : axes) {
      for (double gen_value : axis.values) {
        ModelSpec generating = base;
        axis.apply(generating, gen_value);
        generating.id = std::string(axis.name) + "=" + format_value(gen_value);
        for (double test_value : axis.values) {
          ModelSpec tested = base;
          axis.apply(tested, test_value);
          tested.id = std::string(axis.name) + "=" + format_value(test_value);
          scenarios.push_back(make_scenario(
              "parameter", axis.name, generating, tested,
              format_value(gen_value), format_value(test_value), n, s));
        }
      }
    }
  }
  return scenarios;
}

std::vector<Scenario> build_structural_grid(const StudySettings& s) {
  const auto models = structural_models();
  std::vector<Scenario> scenarios;
  for (std::size_t n : s.sample_sizes) {
    for (const auto& generating : models) {
      for (const auto& tested : models) {
        scenarios.push_back(make_scenario("structural", "shape", generating,
                                          tested, generating.id, tested.id, n,
                                          s));
      }
    }
  }
  return scenarios;
}

std::uint64_t calibration_seed(std::uint64_t master_seed, const ModelSpec& tested,
                               const Design& design, std::size_t b,
                               std::size_t v) {
  std::uint64_t h = master_seed ^ 0xC0A1B2C3D4E5F607ULL;
  (void)splitmix64(h);
  h ^= tested.hash();
  (void)splitmix64(h);
  h ^= design.hash();
  (void)splitmix64(h);
  h ^= (static_cast<std::uint64_t>(b) << 32) | v;
  return splitmix64(h);
}

std::uint64_t evaluation_seed(std::uint64_t master_seed, const ModelSpec& generating,
                              const Design& design) {
  std::uint64_t h = master_seed ^ 0x1357BD02468ACE13ULL;
  (void)splitmix64(h);
  h ^= generating.hash();
  (void)splitmix64(h);
  h ^= design.hash();
  return splitmix64(h);
}

const CalibrationBundle& ScenarioRunner::bundle_for(const ModelSpec& tested,
                                                    const Design& design,
                                                    std::size_t b, std::size_t v) {
  std::ostringstream key;
  key << tested.hash() << ":" << design.hash() << ":" << b << ":" << v;
  auto it = bundles_.find(key.str());
  if (it != bundles_.end()) return it->second;

  const auto plan = StratumPlan::from_design(design, {"trt"});
  auto bundle =
      calibrate_bundle(tested, design, b, v,
                       calibration_seed(master_seed_, tested, design, b, v),
                       plan, n_threads_);
  return bundles_.emplace(key.str(), std::move(bundle)).first->second;
}

PowerResult ScenarioRunner::run(const Scenario& scenario) {
  const Design design =
      Design::balanced_two_arm(scenario.n_subjects, scenario.times);
  const auto& bundle =
      bundle_for(scenario.tested, design, scenario.replicates, scenario.mc_count);
  const std::uint64_t eval_seed =
      evaluation_seed(master_seed_, scenario.generating, design);

  const std::size_t b = scenario.replicates;
  std::vector<unsigned char> reject_npd(b, 0), reject_chi2(b, 0), reject_strat(b, 0);

  parallel_for(
      b,
      [&](std::size_t rep) {
        const SimulatedDataset sim = simulate_dataset(
            scenario.generating, design, eval_seed, rep, StreamPurpose::evaluation);
        const NpdVector npd =
            compute_npd(sim, scenario.tested, bundle.cdf, eval_seed, rep,
                        StreamPurpose::evaluation_jitter);
        reject_npd[rep] =
            ks_statistic(npd).statistic > bundle.global_ks.threshold ? 1 : 0;

        const auto chi2 = stratum_chi2_statistics(
            sim, *bundle.plan, scenario.tested.categories.size(),
            bundle.expected_counts);
        for (std::size_t s = 0; s < chi2.size(); ++s) {
          if (chi2[s] > bundle.stratum_chi2[s].threshold) {
            reject_chi2[rep] = 1;
            break;
          }
        }

        std::vector<std::vector<double>> per_stratum(bundle.plan->strata.size());
        for (const auto& e : npd.entries) {
          per_stratum[bundle.plan->stratum_of(e.time, e.covariates)].push_back(e.npd);
        }
        for (std::size_t s = 0; s < per_stratum.size(); ++s) {
          if (!per_stratum[s].empty() &&
              ks_statistic(per_stratum[s]).statistic >
                  bundle.stratum_ks[s].threshold) {
            reject_strat[rep] = 1;
            break;
          }
        }
      },
      n_threads_);

  auto rate = [b](const std::vector<unsigned char>& flags) {
    std::size_t count = 0;
    for (auto f : flags) count += f;
    return static_cast<double>(count) / static_cast<double>(b);
  };
  auto se = [b](double p) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(b));
  };

  PowerResult result;
  result.scenario_id = scenario.id;
  result.family = scenario.family;
  result.axis = scenario.axis;
  result.generating_label = scenario.generating_label;
  result.tested_label = scenario.tested_label;
  result.n_subjects = scenario.n_subjects;
  result.replicates = b;
  result.power_npd = rate(reject_npd);
  result.se_npd = se(result.power_npd);
  result.power_chi2 = rate(reject_chi2);
  result.se_chi2 = se(result.power_chi2);
  result.power_npd_stratified = rate(reject_strat);
  result.se_npd_stratified = se(result.power_npd_stratified);
  return result;
}

std::vector<PowerResult> ScenarioRunner::run_all(
    const std::vector<Scenario>& scenarios) {
  std::vector<PowerResult> results;
  results.reserve(scenarios.size());
  for (const auto& scenario : scenarios) {
    results.push_back(run(scenario));
  }
  return results;
}

}  // namespace npdcat
