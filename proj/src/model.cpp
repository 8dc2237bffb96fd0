// SPDX-License-Identifier: Apache-2.0
#include "npdcat/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "npdcat/errors.hpp"
#include "npdcat/math.hpp"

namespace npdcat {

namespace {

bool all_numeric(const std::vector<std::string>& labels, std::vector<double>& out) {
  out.clear();
  for (const auto& s : labels) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return false;
    out.push_back(v);
  }
  return true;
}

}  // namespace

CategorySpace::CategorySpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw ConfigError("CategorySpace: need at least 2 categories");
  }
  std::set<std::string> uniq(labels_.begin(), labels_.end());
  if (uniq.size() != labels_.size()) {
    throw ConfigError("CategorySpace: duplicate category labels");
  }
  // Numeric labels must be listed in ascending numeric order so that the
  // declared order and the natural order of the values agree.
  std::vector<double> numeric;
  if (all_numeric(labels_, numeric) &&
      !std::is_sorted(numeric.begin(), numeric.end(),
                      [](double a, double b) { return a < b; })) {
    throw ConfigError("CategorySpace: numeric labels must be strictly increasing");
  }
}

std::size_t CategorySpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw DataError("category '" + label + "' is not in the category space");
}

bool CategorySpace::contains(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

double LinkFunction::inverse(double x) const {
  switch (kind) {
    case LinkKind::logit:
      return expit(x);
  }
  throw ConfigError("unsupported link function");
}

double StructuralShape::transform(double t) const {
  if (t < 0.0) throw ArgumentError("time must be non-negative");
  switch (kind) {
    case ShapeKind::constant:
      return 0.0;
    case ShapeKind::linear:
      return t;
    case ShapeKind::loglinear:
      return std::log(t + 1.0);
    case ShapeKind::quadratic:
      return t * t;
    case ShapeKind::exponential:
      if (!rate) throw ConfigError("exponential shape requires a rate parameter");
      return std::exp(*rate * t) - 1.0;
  }
  throw ConfigError("unknown structural shape");
}

void StructuralShape::validate() const {
  if (kind == ShapeKind::exponential) {
    if (!rate) throw ConfigError("exponential shape requires a rate parameter");
  } else if (rate) {
    throw ConfigError("rate parameter is only valid for the exponential shape");
  }
}

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::constant: return "constant";
    case ShapeKind::linear: return "linear";
    case ShapeKind::loglinear: return "loglinear";
    case ShapeKind::quadratic: return "quadratic";
    case ShapeKind::exponential: return "exponential";
  }
  return "?";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "constant") return ShapeKind::constant;
  if (name == "linear") return ShapeKind::linear;
  if (name == "loglinear") return ShapeKind::loglinear;
  if (name == "quadratic") return ShapeKind::quadratic;
  if (name == "exponential") return ShapeKind::exponential;
  throw ConfigError("unknown structural shape '" + name + "'");
}

void ModelSpec::validate() const {
  shape.validate();
  if (omega1 < 0.0 || omega2 < 0.0) {
    throw ConfigError("random-effect standard deviations must be >= 0");
  }
  const std::size_t k = categories.size();
  if (k > 2) {
    if (cutpoints.size() != k - 1) {
      throw ConfigError("ordinal model needs K-1 cutpoints");
    }
    for (std::size_t i = 1; i < cutpoints.size(); ++i) {
      if (!(cutpoints[i - 1] < cutpoints[i])) {
        throw ConfigError("cutpoints must be strictly increasing");
      }
    }
  } else if (!cutpoints.empty()) {
    throw ConfigError("binary model takes its intercept from mu1, not cutpoints");
  }
}

std::uint64_t ModelSpec::hash() const {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h = splitmix64(h);
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(bits);
  };
  for (const auto& label : categories.labels()) {
    for (char c : label) mix(static_cast<std::uint64_t>(c));
    mix(0xFF);
  }
  mix(static_cast<std::uint64_t>(link.kind));
  mix(static_cast<std::uint64_t>(shape.kind));
  mix_double(shape.rate.value_or(0.0));
  mix_double(mu1);
  mix_double(mu2);
  mix_double(omega1);
  mix_double(omega2);
  mix_double(beta);
  for (double c : cutpoints) mix_double(c);
  return h;
}

bool ModelSpec::operator==(const ModelSpec& other) const {
  return categories == other.categories && link == other.link &&
         shape == other.shape && mu1 == other.mu1 && mu2 == other.mu2 &&
         omega1 == other.omega1 && omega2 == other.omega2 &&
         beta == other.beta && cutpoints == other.cutpoints;
}

double linear_predictor(const ModelSpec& model, const IndividualParameters& params,
                        const Covariates& cov, double t, std::size_t cutpoint_index) {
  const std::size_t k = model.categories.size();
  if (cutpoint_index < 1 || cutpoint_index > k - 1) {
    throw ArgumentError("cutpoint index out of range");
  }
  if (cov.trt != 0 && cov.trt != 1) {
    throw DataError("treatment indicator must be 0 or 1");
  }
  const double base = (k == 2) ? 0.0 : model.cutpoints[cutpoint_index - 1];
  const double slope = params.slope + model.beta * cov.trt;
  return base + (params.intercept + slope * model.shape.transform(t));
}

void cumulative_probs_at(const ModelSpec& model, const IndividualParameters& params,
                         int trt, double h, std::span<double> gamma_out) {
  const std::size_t k = model.categories.size();
  if (gamma_out.size() != k - 1) {
    throw ArgumentError("cumulative_probs_at: output span must hold K-1 values");
  }
  const double shift = params.intercept + (params.slope + model.beta * trt) * h;
  if (k == 2) {
    // gamma(c_1) = 1 - P(Y = c_2): the binary intercept parameterizes P(Y=1).
    gamma_out[0] = 1.0 - model.link.inverse(shift);
    return;
  }
  for (std::size_t c = 0; c + 1 < k; ++c) {
    gamma_out[c] = model.link.inverse(model.cutpoints[c] + shift);
  }
}

ConditionalProbs conditional_probs(const ModelSpec& model,
                                   const IndividualParameters& params,
                                   const Covariates& cov, double t) {
  const std::size_t k = model.categories.size();
  if (cov.trt != 0 && cov.trt != 1) {
    throw DataError("treatment indicator must be 0 or 1");
  }
  ConditionalProbs out;
  out.gamma.resize(k);
  out.pi.resize(k);
  cumulative_probs_at(model, params, cov.trt, model.shape.transform(t),
                      std::span<double>(out.gamma.data(), k - 1));
  out.gamma[k - 1] = 1.0;
  double prev = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    out.pi[c] = out.gamma[c] - prev;
    prev = out.gamma[c];
  }
  return out;
}

}  // namespace npdcat
