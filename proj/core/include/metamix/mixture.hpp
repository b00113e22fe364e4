// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "metamix/common.hpp"

namespace metamix {

struct NormalComponent {
  double weight{1.0};
  double mean{0.0};
  double sd{1.0};
};

// Weighted set of normal components; the universal posterior
// representation. Immutable after construction.
class NormalMixture {
 public:
  // Defaults to a single standard-normal component.
  NormalMixture() : components_{{1.0, 0.0, 1.0}} {}
  explicit NormalMixture(std::vector<NormalComponent> components);

  const std::vector<NormalComponent>& components() const { return components_; }

  double pdf(double x) const;
  double cdf(double x) const;

  // Inverse CDF by bracketing plus safeguarded Newton; |cdf(x)-p| < 1e-10.
  double quantile(double p) const;

  double median() const { return quantile(0.5); }
  double mean() const;
  double sd() const;

  // Narrowest connected interval holding `level` posterior mass.
  Interval shortest_interval(double level) const;
  Interval equal_tailed_interval(double level) const;

 private:
  std::vector<NormalComponent> components_;
};

// p(M_i|y) from log marginal likelihoods and prior model probabilities,
// normalized in log space.
std::vector<double> model_posterior_probs(std::span<const double> log_marginals,
                                          std::span<const double> priors);

inline double bayes_factor(double log_marginal_a, double log_marginal_b) {
  return std::exp(log_marginal_a - log_marginal_b);
}

struct WeightedPosterior {
  std::string label;
  double log_marginal{0.0};
  NormalMixture posterior;
};

struct ModelPosterior {
  std::string label;
  double prior_prob{0.0};
  double log_marginal{0.0};
  double posterior_prob{0.0};
};

struct ModelAverage {
  std::vector<ModelPosterior> models;
  NormalMixture pooled;

  // BF of model a over model b (indices into `models`).
  double bayes_factor_between(std::size_t a, std::size_t b) const;
};

// Bayes-theorem model averaging: posterior model probabilities plus the
// flattened mixture of conditional posteriors.
ModelAverage average(const std::vector<WeightedPosterior>& fits,
                     std::span<const double> priors);

}  // namespace metamix
