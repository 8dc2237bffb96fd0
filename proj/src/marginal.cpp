// SPDX-License-Identifier: Apache-2.0
#include "npdcat/marginal.hpp"

#include <cmath>

#include "npdcat/errors.hpp"
#include "npdcat/parallel.hpp"
#include "npdcat/rng.hpp"
#include "npdcat/simulate.hpp"

namespace npdcat {

MarginalCdf::MarginalCdf(std::size_t n_observations, std::size_t n_categories,
                         std::size_t v)
    : n_obs_(n_observations),
      k_(n_categories),
      v_(v),
      f_(n_observations * n_categories, 0.0),
      se_(n_observations * n_categories, 0.0) {
  if (v < 1) throw ArgumentError("marginal CDF needs at least one draw");
}

MarginalCdf estimate_marginal_cdf(const ModelSpec& model, const Design& design,
                                  std::size_t v, std::uint64_t master_seed,
                                  unsigned n_threads) {
  model.validate();
  if (v < 1) throw ArgumentError("estimate_marginal_cdf: V must be >= 1");
  const std::size_t k = model.categories.size();
  MarginalCdf cdf(design.n_observations(), k, v);

  // Observation offsets per subject.
  std::vector<std::size_t> offsets(design.n_subjects() + 1, 0);
  for (std::size_t i = 0; i < design.n_subjects(); ++i) {
    offsets[i + 1] = offsets[i] + design.subjects()[i].times.size();
  }

  parallel_for(
      design.n_subjects(),
      [&](std::size_t i) {
        const auto& subject = design.subjects()[i];
        const std::size_t n_i = subject.times.size();
        std::vector<double> h(n_i);
        for (std::size_t j = 0; j < n_i; ++j) {
          h[j] = model.shape.transform(subject.times[j]);
        }
        std::vector<double> sum(n_i * (k - 1), 0.0);
        std::vector<double> sum_sq(n_i * (k - 1), 0.0);
        std::vector<double> gamma(k - 1);
        Stream stream(SeedSpec{master_seed, 0, i, StreamPurpose::cdf});
        for (std::size_t draw = 0; draw < v; ++draw) {
          const auto params = draw_individual_parameters(model, stream);
          for (std::size_t j = 0; j < n_i; ++j) {
            cumulative_probs_at(model, params, subject.covariates.trt, h[j],
                                gamma);
            for (std::size_t c = 0; c + 1 < k; ++c) {
              const double g = gamma[c];
              sum[j * (k - 1) + c] += g;
              sum_sq[j * (k - 1) + c] += g * g;
            }
          }
        }
        const double dv = static_cast<double>(v);
        for (std::size_t j = 0; j < n_i; ++j) {
          auto f = cdf.mutable_values(offsets[i] + j);
          auto se = cdf.mutable_errors(offsets[i] + j);
          for (std::size_t c = 0; c + 1 < k; ++c) {
            const double m = sum[j * (k - 1) + c] / dv;
            f[c] = m;
            if (v > 1) {
              const double var =
                  (sum_sq[j * (k - 1) + c] - dv * m * m) / (dv - 1.0);
              se[c] = std::sqrt(std::max(0.0, var) / dv);
            }
          }
          f[k - 1] = 1.0;
          se[k - 1] = 0.0;
        }
      },
      n_threads);
  return cdf;
}

}  // namespace npdcat
