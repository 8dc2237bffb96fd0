// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace npdcat {

// Ordered, finite category space c_1 < ... < c_K.
class CategorySpace {
 public:
  explicit CategorySpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  // Index of a label, or throws DataError when the label is unknown.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const;

  bool operator==(const CategorySpace&) const = default;

  static CategorySpace binary01() { return CategorySpace({"0", "1"}); }

 private:
  std::vector<std::string> labels_;
};

enum class LinkKind { logit };
// Extension point for probit / log-log / cloglog / cauchit; only the logit
// is exercised here.
struct LinkFunction {
  LinkKind kind = LinkKind::logit;
  double inverse(double x) const;
  bool operator==(const LinkFunction&) const = default;
};

enum class ShapeKind { constant, linear, loglinear, quadratic, exponential };

// Time transform h(t) of the structural model. The exponential shape carries
// a fixed rate (no random effect on it).
struct StructuralShape {
  ShapeKind kind = ShapeKind::linear;
  std::optional<double> rate;  // required iff kind == exponential

  double transform(double t) const;
  void validate() const;
  bool operator==(const StructuralShape&) const = default;
};

const char* to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

// Treatment indicator plus an extension map for further named covariates.
struct Covariates {
  int trt = 0;
  std::map<std::string, double> extra;
  bool operator==(const Covariates&) const = default;
};

// Realized per-subject parameters theta_i = mu + b_i.
// theta[0] is the intercept (the random intercept offset for K>2 models,
// where the fixed cutpoints carry the location); theta[1] is the time slope.
struct IndividualParameters {
  double intercept = 0.0;
  double slope = 0.0;
};

// Full population model for repeated categorical outcomes.
//
// Binary (K=2): logit P(Y = c_2) = theta1 + (theta2 + beta*trt) * h(t),
//   theta1 ~ N(mu1, omega1^2), theta2 ~ N(mu2, omega2^2).
// Ordinal (K>2): cumulative logit P(Y <= c_k) = alpha_k + b1
//   + (theta2 + beta*trt) * h(t) with strictly increasing cutpoints alpha.
struct ModelSpec {
  CategorySpace categories = CategorySpace::binary01();
  LinkFunction link;
  StructuralShape shape;
  double mu1 = 0.0;                 // binary intercept mean (unused for K>2)
  double mu2 = 0.0;                 // slope mean
  double omega1 = 0.0;              // intercept SD (>= 0)
  double omega2 = 0.0;              // slope SD (>= 0)
  double beta = 0.0;                // treatment effect on the slope
  std::vector<double> cutpoints;    // K-1 increasing cutpoints when K > 2

  void validate() const;
  std::string id;                   // optional human-readable tag

  // Stable content hash over everything that affects simulation output.
  std::uint64_t hash() const;
  bool operator==(const ModelSpec& other) const;
};

struct ConditionalProbs {
  std::vector<double> pi;     // category probabilities, size K
  std::vector<double> gamma;  // cumulative probabilities, gamma[K-1] == 1
};

// alpha_k-or-theta1 + (theta2 + beta*trt) * h(t), in logit units.
// cutpoint_index is 1-based in [1, K-1].
double linear_predictor(const ModelSpec& model, const IndividualParameters& params,
                        const Covariates& cov, double t, std::size_t cutpoint_index = 1);

// Category and cumulative probabilities at time t for one subject.
ConditionalProbs conditional_probs(const ModelSpec& model,
                                   const IndividualParameters& params,
                                   const Covariates& cov, double t);

// Allocation-free core used by the Monte Carlo loops: writes the K-1
// non-trivial cumulative probabilities for a precomputed time transform h.
void cumulative_probs_at(const ModelSpec& model, const IndividualParameters& params,
                         int trt, double h, std::span<double> gamma_out);

}  // namespace npdcat
