// SPDX-License-Identifier: Apache-2.0
#include "npdcat/stattests.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "npdcat/errors.hpp"
#include "npdcat/math.hpp"
#include "npdcat/parallel.hpp"
#include "npdcat/simulate.hpp"

namespace npdcat {

KsResult ks_statistic(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("ks_statistic: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw ArgumentError("ks_statistic: non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - phi;
    const double lower = phi - static_cast<double>(i) / n;
    d = std::max(d, std::max(upper, lower));
  }
  return {d, sorted.size()};
}

KsResult ks_statistic(const NpdVector& npd) {
  return ks_statistic(std::span<const double>(npd.npd_values()));
}

double empirical_threshold(std::span<const double> sorted, double alpha) {
  if (sorted.empty()) throw ArgumentError("empirical_threshold: empty sample");
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw ArgumentError("empirical_threshold: alpha must lie in (0,1)");
  }
  const std::size_t b = sorted.size();
  const auto exceed = static_cast<std::size_t>(
      std::floor(alpha * static_cast<double>(b)));
  const std::size_t index = b - exceed;  // 1-based order statistic
  return sorted[index - 1];
}

double NullDistribution::empirical_p(double observed) const {
  const auto first = std::lower_bound(statistics.begin(), statistics.end(), observed);
  const auto count = static_cast<double>(std::distance(first, statistics.end()));
  return (1.0 + count) / (static_cast<double>(statistics.size()) + 1.0);
}

namespace {

std::string covariate_label(const Covariates& cov) {
  std::ostringstream out;
  out << "trt=" << cov.trt;
  for (const auto& [name, value] : cov.extra) {
    out << "," << name << "=" << value;
  }
  return out.str();
}

bool covariates_match(const Covariates& a, const Covariates& b) {
  return a.trt == b.trt && a.extra == b.extra;
}

}  // namespace

Covariates StratumPlan::reduce(const Covariates& cov) const {
  Covariates reduced;
  for (const auto& name : covariate_names) {
    if (name == "trt") {
      reduced.trt = cov.trt;
    } else {
      const auto it = cov.extra.find(name);
      if (it == cov.extra.end()) {
        throw DataError("stratification covariate '" + name + "' missing");
      }
      reduced.extra[name] = it->second;
    }
  }
  return reduced;
}

std::size_t StratumPlan::stratum_of(double time, const Covariates& cov) const {
  const Covariates reduced = reduce(cov);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    if (strata[s].time == time && covariates_match(strata[s].covariates, reduced)) {
      return s;
    }
  }
  throw DataError("observation does not match any stratum");
}

StratumPlan StratumPlan::from_design(const Design& design,
                                     const std::vector<std::string>& covariate_names,
                                     double alpha) {
  std::set<double> times;
  for (const auto& s : design.subjects()) {
    times.insert(s.times.begin(), s.times.end());
  }
  StratumPlan plan;
  plan.alpha = alpha;
  plan.covariate_names = covariate_names;
  // Distinct combinations of the selected covariates, in a stable order.
  std::vector<Covariates> combos;
  for (const auto& s : design.subjects()) {
    const Covariates reduced = plan.reduce(s.covariates);
    bool seen = false;
    for (const auto& c : combos) {
      if (covariates_match(c, reduced)) { seen = true; break; }
    }
    if (!seen) combos.push_back(reduced);
  }
  std::sort(combos.begin(), combos.end(), [](const Covariates& a, const Covariates& b) {
    if (a.trt != b.trt) return a.trt < b.trt;
    return a.extra < b.extra;
  });

  plan.n_visits = times.size();
  plan.n_covariate_combos = combos.size();
  for (double t : times) {
    for (const auto& c : combos) {
      Stratum stratum;
      stratum.time = t;
      stratum.covariates = c;
      std::ostringstream label;
      label << "t=" << t << ":" << covariate_label(c);
      stratum.label = label.str();
      plan.strata.push_back(std::move(stratum));
    }
  }
  return plan;
}

std::vector<double> stratum_expected_counts(const Design& design,
                                            const MarginalCdf& cdf,
                                            const StratumPlan& plan) {
  const std::size_t k = cdf.n_categories();
  std::vector<double> expected(plan.strata.size() * k, 0.0);
  std::size_t obs = 0;
  for (const auto& subject : design.subjects()) {
    for (double t : subject.times) {
      const std::size_t s = plan.stratum_of(t, subject.covariates);
      const auto f = cdf.values(obs);
      double prev = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        expected[s * k + c] += f[c] - prev;
        prev = f[c];
      }
      ++obs;
    }
  }
  return expected;
}

std::vector<double> stratum_chi2_statistics(const Dataset& data,
                                            const StratumPlan& plan,
                                            std::size_t n_categories,
                                            std::span<const double> expected) {
  const std::size_t k = n_categories;
  if (expected.size() != plan.strata.size() * k) {
    throw ArgumentError("expected-count table does not match the plan");
  }
  std::vector<double> observed(plan.strata.size() * k, 0.0);
  for (const auto& row : data.rows) {
    const std::size_t s = plan.stratum_of(row.time, row.covariates);
    observed[s * k + row.category] += 1.0;
  }
  std::vector<double> stats(plan.strata.size(), 0.0);
  for (std::size_t s = 0; s < plan.strata.size(); ++s) {
    double chi2 = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double e = expected[s * k + c];
      const double o = observed[s * k + c];
      if (e > 0.0) {
        chi2 += (o - e) * (o - e) / e;
      } else if (o > 0.0) {
        chi2 = std::numeric_limits<double>::infinity();
      }
    }
    stats[s] = chi2;
  }
  return stats;
}

namespace {

NullDistribution make_null(std::vector<double> stats, double alpha,
                           std::size_t n, const ModelSpec& model,
                           const Design& design, std::uint64_t master_seed,
                           std::size_t v) {
  std::sort(stats.begin(), stats.end());
  NullDistribution null_dist;
  null_dist.threshold = empirical_threshold(stats, alpha);
  null_dist.statistics = std::move(stats);
  null_dist.alpha = alpha;
  null_dist.n = n;
  null_dist.model_hash = model.hash();
  null_dist.design_hash = design.hash();
  null_dist.master_seed = master_seed;
  null_dist.mc_count = v;
  return null_dist;
}

}  // namespace

CalibrationBundle calibrate_bundle(const ModelSpec& model, const Design& design,
                                   std::size_t b, std::size_t v,
                                   std::uint64_t master_seed,
                                   const std::optional<StratumPlan>& plan,
                                   unsigned n_threads) {
  if (b < 100) throw ArgumentError("calibration needs at least 100 replicates");
  model.validate();

  CalibrationBundle bundle{
      estimate_marginal_cdf(model, design, v, master_seed, n_threads)};
  bundle.plan = plan;
  bundle.replicate_count = b;

  const std::size_t n_strata = plan ? plan->strata.size() : 0;
  const std::size_t k = model.categories.size();

  // Stratum index per observation, fixed by the design.
  std::vector<std::size_t> obs_stratum;
  if (plan) {
    obs_stratum.reserve(design.n_observations());
    for (const auto& subject : design.subjects()) {
      for (double t : subject.times) {
        obs_stratum.push_back(plan->stratum_of(t, subject.covariates));
      }
    }
    bundle.expected_counts = stratum_expected_counts(design, bundle.cdf, *plan);
  }

  std::vector<double> global_stats(b, 0.0);
  std::vector<std::vector<double>> ks_strata(n_strata, std::vector<double>(b, 0.0));
  std::vector<std::vector<double>> chi2_strata(n_strata, std::vector<double>(b, 0.0));

  parallel_for(
      b,
      [&](std::size_t rep) {
        const SimulatedDataset sim = simulate_dataset(
            model, design, master_seed, rep, StreamPurpose::calibration);
        const NpdVector npd =
            compute_npd(sim, model, bundle.cdf, master_seed, rep,
                        StreamPurpose::calibration_jitter);
        global_stats[rep] = ks_statistic(npd).statistic;
        if (!plan) return;
        std::vector<std::vector<double>> per_stratum(n_strata);
        for (const auto& e : npd.entries) {
          per_stratum[obs_stratum[e.obs_index]].push_back(e.npd);
        }
        for (std::size_t s = 0; s < n_strata; ++s) {
          ks_strata[s][rep] =
              per_stratum[s].empty() ? 0.0 : ks_statistic(per_stratum[s]).statistic;
        }
        const auto chi2 = stratum_chi2_statistics(sim, *plan, k,
                                                  bundle.expected_counts);
        for (std::size_t s = 0; s < n_strata; ++s) chi2_strata[s][rep] = chi2[s];
      },
      n_threads);

  bundle.global_ks = make_null(std::move(global_stats), 0.05,
                               design.n_observations(), model, design,
                               master_seed, v);
  if (plan) {
    const double alpha_j = plan->alpha_per_stratum();
    for (std::size_t s = 0; s < n_strata; ++s) {
      bundle.stratum_ks.push_back(make_null(std::move(ks_strata[s]), alpha_j, 0,
                                            model, design, master_seed, v));
      bundle.stratum_chi2.push_back(make_null(std::move(chi2_strata[s]), alpha_j,
                                              0, model, design, master_seed, v));
    }
  }
  return bundle;
}

NullDistribution calibrate_null(const ModelSpec& model, const Design& design,
                                std::size_t b, std::size_t v,
                                std::uint64_t master_seed, unsigned n_threads) {
  return calibrate_bundle(model, design, b, v, master_seed, {}, n_threads)
      .global_ks;
}

TestDecision corrected_ks_test(const KsResult& observed,
                               const NullDistribution& null_dist) {
  if (null_dist.n != 0 && observed.n != null_dist.n) {
    throw ArgumentError(
        "corrected_ks_test: sample size does not match the calibration design");
  }
  TestDecision decision;
  decision.test_name = "corrected-ks";
  decision.statistic = observed.statistic;
  decision.threshold = null_dist.threshold;
  decision.reject = observed.statistic > null_dist.threshold;
  decision.empirical_p = null_dist.empirical_p(observed.statistic);
  return decision;
}

TestDecision chi_square_stratified(const Dataset& data, const ModelSpec& model,
                                   const CalibrationBundle& bundle) {
  if (!bundle.plan) {
    throw ArgumentError("chi_square_stratified: bundle has no stratum plan");
  }
  const auto& plan = *bundle.plan;
  const std::size_t k = model.categories.size();
  const auto stats =
      stratum_chi2_statistics(data, plan, k, bundle.expected_counts);
  TestDecision decision;
  decision.test_name = "stratified-chi-square";
  for (std::size_t s = 0; s < plan.strata.size(); ++s) {
    StratumTestDetail detail;
    detail.label = plan.strata[s].label;
    detail.statistic = stats[s];
    detail.threshold = bundle.stratum_chi2[s].threshold;
    detail.empirical_p = bundle.stratum_chi2[s].empirical_p(stats[s]);
    detail.reject = stats[s] > detail.threshold;
    decision.strata.push_back(std::move(detail));
    decision.reject = decision.reject || decision.strata.back().reject;
  }
  return decision;
}

TestDecision chi_square_stratified(const Dataset& data, const ModelSpec& model,
                                   const StratumPlan& plan, std::size_t b,
                                   std::size_t v, std::uint64_t master_seed,
                                   unsigned n_threads) {
  const Design design = data.to_design();
  if (!design.is_balanced()) {
    throw InapplicableError(
        "stratified Chi-square requires all subjects to share one visit schedule");
  }
  const auto bundle =
      calibrate_bundle(model, design, b, v, master_seed, plan, n_threads);
  return chi_square_stratified(data, model, bundle);
}

TestDecision stratified_npd_test(const NpdVector& npd, const StratumPlan& plan,
                                 const std::vector<NullDistribution>& nulls,
                                 double alpha) {
  if (nulls.size() != plan.strata.size()) {
    throw ArgumentError("stratified_npd_test: one null distribution per stratum required");
  }
  const double alpha_j = alpha / static_cast<double>(plan.strata.size());
  for (const auto& null_dist : nulls) {
    if (std::fabs(null_dist.alpha - alpha_j) > 1e-12) {
      throw ArgumentError(
          "stratified_npd_test: null distributions not calibrated at alpha/(n*p)");
    }
  }
  std::vector<std::vector<double>> per_stratum(plan.strata.size());
  for (const auto& e : npd.entries) {
    per_stratum[plan.stratum_of(e.time, e.covariates)].push_back(e.npd);
  }
  TestDecision decision;
  decision.test_name = "stratified-npd-ks";
  for (std::size_t s = 0; s < plan.strata.size(); ++s) {
    StratumTestDetail detail;
    detail.label = plan.strata[s].label;
    detail.n_obs = per_stratum[s].size();
    if (per_stratum[s].empty()) {
      decision.warnings.push_back("stratum '" + plan.strata[s].label +
                                  "' is empty; skipped");
      decision.strata.push_back(std::move(detail));
      continue;
    }
    if (per_stratum[s].size() < 5) {
      decision.warnings.push_back("stratum '" + plan.strata[s].label +
                                  "' has fewer than 5 observations");
    }
    detail.statistic = ks_statistic(per_stratum[s]).statistic;
    detail.threshold = nulls[s].threshold;
    detail.empirical_p = nulls[s].empirical_p(detail.statistic);
    detail.reject = detail.statistic > detail.threshold;
    decision.strata.push_back(std::move(detail));
    decision.reject = decision.reject || decision.strata.back().reject;
  }
  return decision;
}

}  // namespace npdcat
