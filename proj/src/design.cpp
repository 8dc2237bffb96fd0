// SPDX-License-Identifier: Apache-2.0
#include "npdcat/design.hpp"

#include <cstring>

#include "npdcat/errors.hpp"
#include "npdcat/rng.hpp"

namespace npdcat {

Design::Design(std::vector<SubjectDesign> subjects) : subjects_(std::move(subjects)) {
  if (subjects_.empty()) throw ConfigError("design needs at least one subject");
  for (const auto& s : subjects_) {
    if (s.times.empty()) {
      throw ConfigError("subject '" + s.id + "' has no observation times");
    }
    for (std::size_t j = 1; j < s.times.size(); ++j) {
      if (!(s.times[j - 1] < s.times[j])) {
        throw ConfigError("subject '" + s.id + "' times must be strictly increasing");
      }
    }
    n_obs_ += s.times.size();
  }
}

bool Design::is_balanced() const {
  const auto& ref = subjects_.front().times;
  for (const auto& s : subjects_) {
    if (s.times != ref) return false;
  }
  return true;
}

std::uint64_t Design::hash() const {
  std::uint64_t h = 0x452821E638D01377ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h = splitmix64(h);
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(bits);
  };
  for (const auto& s : subjects_) {
    for (char c : s.id) mix(static_cast<std::uint64_t>(c));
    mix(static_cast<std::uint64_t>(s.covariates.trt));
    for (const auto& [name, value] : s.covariates.extra) {
      for (char c : name) mix(static_cast<std::uint64_t>(c));
      mix_double(value);
    }
    for (double t : s.times) mix_double(t);
    mix(0xFE);
  }
  return h;
}

Design Design::balanced_two_arm(std::size_t n, std::vector<double> times) {
  if (n < 2) throw ConfigError("two-arm design needs at least 2 subjects");
  std::vector<SubjectDesign> subjects;
  subjects.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SubjectDesign s;
    s.id = "S" + std::to_string(i + 1);
    s.covariates.trt = (i >= n / 2) ? 1 : 0;
    s.times = times;
    subjects.push_back(std::move(s));
  }
  return Design(std::move(subjects));
}

}  // namespace npdcat
