// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "npdcat/dataset.hpp"
#include "npdcat/design.hpp"
#include "npdcat/model.hpp"
#include "npdcat/rng.hpp"

namespace npdcat {

// One parameter draw: theta_x = mu_x + b_x, b_x ~ N(0, omega_x^2).
// For K>2 models the intercept draw is the random offset around the fixed
// cutpoints. Consumes exactly two uniforms from the stream.
IndividualParameters draw_individual_parameters(const ModelSpec& model,
                                                Stream& stream);

// Convenience overload deriving the stream from a SeedSpec.
IndividualParameters draw_individual_parameters(const ModelSpec& model,
                                                const SeedSpec& seed);

// Simulates one dataset: per subject a parameter draw, then one inverse-CDF
// categorical draw per observation time (a single uniform each, so streams
// stay aligned across models sharing a design).
SimulatedDataset simulate_dataset(const ModelSpec& model, const Design& design,
                                  std::uint64_t master_seed,
                                  std::uint64_t replicate = 0,
                                  StreamPurpose purpose = StreamPurpose::simulation);

// count replicates; replicate r uses substreams keyed (r, subject), so the
// output is identical for any execution order or degree of parallelism.
std::vector<SimulatedDataset> simulate_replicates(const ModelSpec& model,
                                                  const Design& design,
                                                  std::size_t count,
                                                  std::uint64_t master_seed,
                                                  unsigned n_threads = 1);

// Inverse-CDF draw on the cumulative probabilities: the smallest category
// whose gamma reaches u.
std::size_t sample_category(const ConditionalProbs& probs, double u);

}  // namespace npdcat
