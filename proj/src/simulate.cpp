// SPDX-License-Identifier: Apache-2.0
#include "npdcat/simulate.hpp"

#include "npdcat/errors.hpp"
#include "npdcat/parallel.hpp"

namespace npdcat {

IndividualParameters draw_individual_parameters(const ModelSpec& model,
                                                Stream& stream) {
  const double z1 = normal_quantile(stream.uniform_open());
  const double z2 = normal_quantile(stream.uniform_open());
  IndividualParameters params;
  const double loc1 = (model.categories.size() == 2) ? model.mu1 : 0.0;
  params.intercept = loc1 + model.omega1 * z1;
  params.slope = model.mu2 + model.omega2 * z2;
  return params;
}

IndividualParameters draw_individual_parameters(const ModelSpec& model,
                                                const SeedSpec& seed) {
  Stream stream(seed);
  return draw_individual_parameters(model, stream);
}

std::size_t sample_category(const ConditionalProbs& probs, double u) {
  const std::size_t k = probs.gamma.size();
  for (std::size_t c = 0; c + 1 < k; ++c) {
    if (u <= probs.gamma[c]) return c;
  }
  return k - 1;
}

SimulatedDataset simulate_dataset(const ModelSpec& model, const Design& design,
                                  std::uint64_t master_seed,
                                  std::uint64_t replicate,
                                  StreamPurpose purpose) {
  model.validate();
  SimulatedDataset data;
  data.model_hash = model.hash();
  data.master_seed = master_seed;
  data.rows.reserve(design.n_observations());
  for (std::size_t i = 0; i < design.n_subjects(); ++i) {
    const auto& subject = design.subjects()[i];
    Stream stream(SeedSpec{master_seed, replicate, i, purpose});
    const IndividualParameters params = draw_individual_parameters(model, stream);
    for (double t : subject.times) {
      const auto probs = conditional_probs(model, params, subject.covariates, t);
      Observation row;
      row.subject_id = subject.id;
      row.time = t;
      row.category = sample_category(probs, stream.uniform_open());
      row.covariates = subject.covariates;
      data.rows.push_back(std::move(row));
    }
  }
  return data;
}

std::vector<SimulatedDataset> simulate_replicates(const ModelSpec& model,
                                                  const Design& design,
                                                  std::size_t count,
                                                  std::uint64_t master_seed,
                                                  unsigned n_threads) {
  if (count < 1) throw ArgumentError("replicate count must be >= 1");
  std::vector<SimulatedDataset> out(count);
  parallel_for(
      count,
      [&](std::size_t r) {
        out[r] = simulate_dataset(model, design, master_seed, r);
      },
      n_threads);
  return out;
}

}  // namespace npdcat
