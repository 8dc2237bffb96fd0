// SPDX-License-Identifier: Apache-2.0
#include "npdcat/npd.hpp"

#include <algorithm>

#include "npdcat/errors.hpp"
#include "npdcat/math.hpp"

namespace npdcat {

std::vector<double> NpdVector::npd_values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.npd);
  return out;
}

std::vector<double> NpdVector::pd_values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.pd);
  return out;
}

double sample_pd(double f_lower, double f_upper, Stream& stream) {
  if (f_lower < 0.0 || f_upper > 1.0) {
    throw ArgumentError("sample_pd: bounds must lie in [0,1]");
  }
  if (!(f_lower < f_upper)) {
    throw InapplicableError("sample_pd: degenerate interval (observed category has zero predicted probability)");
  }
  return stream.uniform_open(f_lower, f_upper);
}

double sample_pd(double f_lower, double f_upper, const SeedSpec& seed) {
  Stream stream(seed);
  return sample_pd(f_lower, f_upper, stream);
}

NpdVector compute_npd(const Dataset& data, const ModelSpec& model,
                      const MarginalCdf& cdf, std::uint64_t master_seed,
                      std::uint64_t jitter_replicate, StreamPurpose jitter_purpose) {
  if (cdf.n_observations() != data.n_rows()) {
    throw ArgumentError("compute_npd: marginal CDF does not match the dataset");
  }
  const std::size_t k = model.categories.size();
  NpdVector out;
  out.mc_count = cdf.mc_count();
  out.epsilon = 1.0 / (10.0 * static_cast<double>(cdf.mc_count()));
  out.entries.reserve(data.n_rows());

  for (std::size_t o = 0; o < data.n_rows(); ++o) {
    const auto& row = data.rows[o];
    if (row.category >= k) {
      throw DataError("observation category index out of range");
    }
    const auto f = cdf.values(o);
    const double lower = (row.category == 0) ? 0.0 : f[row.category - 1];
    const double upper = f[row.category];
    if (!(lower < upper)) {
      out.degenerate.push_back({o, row.subject_id, row.time, row.category});
      continue;
    }
    Stream stream(SeedSpec{master_seed, jitter_replicate, o, jitter_purpose});
    NpdEntry e;
    e.obs_index = o;
    e.subject_id = row.subject_id;
    e.time = row.time;
    e.covariates = row.covariates;
    e.category = row.category;
    e.f_lower = lower;
    e.f_upper = upper;
    e.pd = stream.uniform_open(lower, upper);
    const double clamped = std::clamp(e.pd, out.epsilon, 1.0 - out.epsilon);
    e.npd = normal_quantile(clamped);
    out.entries.push_back(std::move(e));
  }
  return out;
}

NpdVector compute_npd(const Dataset& data, const ModelSpec& model, std::size_t v,
                      std::uint64_t master_seed, unsigned n_threads) {
  const Design design = data.to_design();
  const MarginalCdf cdf =
      estimate_marginal_cdf(model, design, v, master_seed, n_threads);
  return compute_npd(data, model, cdf, master_seed, 0, StreamPurpose::jitter);
}

}  // namespace npdcat
