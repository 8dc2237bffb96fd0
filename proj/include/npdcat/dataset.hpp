// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npdcat/design.hpp"
#include "npdcat/model.hpp"

namespace npdcat {

struct Observation {
  std::string subject_id;
  double time = 0.0;
  std::size_t category = 0;  // index into the category space
  Covariates covariates;
};

// Long-format repeated categorical data, kept in subject-then-time order.
struct Dataset {
  std::vector<Observation> rows;

  // Provenance, set when the dataset came from the simulator.
  std::uint64_t model_hash = 0;
  std::uint64_t master_seed = 0;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_subjects() const;

  // Reconstructs the observation schedule; rows must be grouped by subject.
  Design to_design() const;
};

using SimulatedDataset = Dataset;

}  // namespace npdcat
