// SPDX-License-Identifier: Apache-2.0
#include "npdcat/dataset.hpp"

#include "npdcat/errors.hpp"

namespace npdcat {

std::size_t Dataset::n_subjects() const {
  std::size_t n = 0;
  const std::string* prev = nullptr;
  for (const auto& row : rows) {
    if (!prev || row.subject_id != *prev) ++n;
    prev = &row.subject_id;
  }
  return n;
}

Design Dataset::to_design() const {
  if (rows.empty()) throw DataError("dataset is empty");
  std::vector<SubjectDesign> subjects;
  for (const auto& row : rows) {
    if (subjects.empty() || subjects.back().id != row.subject_id) {
      SubjectDesign s;
      s.id = row.subject_id;
      s.covariates = row.covariates;
      subjects.push_back(std::move(s));
    }
    if (subjects.back().covariates != row.covariates) {
      throw DataError("subject '" + row.subject_id +
                      "' has inconsistent covariates across rows");
    }
    subjects.back().times.push_back(row.time);
  }
  return Design(std::move(subjects));
}

}  // namespace npdcat
