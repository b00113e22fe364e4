// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "metamix/common.hpp"
#include "metamix/effect_size.hpp"
#include "metamix/mixture.hpp"

namespace metamix {

// Normal prior on the overall effect.
using EffectPrior = Gaussian;

struct HalfNormalPrior {
  double scale{0.5};
};

// Density values on an ascending non-negative support grid; a single
// support point encodes a point mass.
struct TabulatedPrior {
  std::vector<double> support;
  std::vector<double> density;

  void validate() const;
};

using HeterogeneityPrior = std::variant<HalfNormalPrior, TabulatedPrior>;

// Discretized joint posterior p(mu, tau | source): tau point masses with a
// conditional normal for mu at each point. Produced by posterior_as_prior
// and consumed by the MAP analysis route.
struct HierarchicalPrior {
  std::vector<double> tau_support;
  std::vector<double> tau_weights;
  std::vector<EffectPrior> mu_given_tau;

  void validate() const;
};

// Quadrature grid over tau: abscissas, bare quadrature weights, and prior
// mass (weight times prior density) per point.
struct TauGrid {
  std::vector<double> tau;
  std::vector<double> quad_weight;
  std::vector<double> prior_mass;

  std::size_t size() const { return tau.size(); }
};

struct ConditionalPosterior {
  double mean{0.0};
  double sd{1.0};
  double log_marginal{0.0};  // log p(y | tau) with mu integrated out
};

// Conjugate update of the effect prior at fixed tau, plus the conditional
// evidence log p(y|tau), all in log space.
ConditionalPosterior conditional_mu_posterior(const Dataset& data,
                                              const EffectPrior& prior, double tau);

struct NNHMFit {
  double log_marginal{0.0};
  std::vector<double> tau_grid;
  std::vector<double> tau_quad_weights;
  std::vector<double> tau_posterior_weights;
  std::vector<Gaussian> conditional_mu;
  NormalMixture mu_posterior;
};

// Fixed-size uniform Simpson grid spanning [0, tau_max]; `intervals` must
// be even. Point-mass priors collapse to a single grid point.
TauGrid make_uniform_grid(const HeterogeneityPrior& prior, std::size_t intervals);

NNHMFit fit_on_grid(const Dataset& data, const EffectPrior& prior, const TauGrid& grid);

// Doubling refinement from 256 intervals until the log marginal changes by
// < 1e-6, capped at 8192 intervals.
TauGrid build_tau_grid(const HeterogeneityPrior& het, const Dataset& data,
                       const EffectPrior& eff);

NNHMFit fit(const Dataset& data, const EffectPrior& eff, const HeterogeneityPrior& het);
NNHMFit fit(const Dataset& data, const HierarchicalPrior& prior);

HierarchicalPrior posterior_as_prior(const NNHMFit& fit);

// Heterogeneity posterior as a tabulated density, renormalized under the
// grid's quadrature rule.
TabulatedPrior tau_prior_from_posterior(const NNHMFit& fit);

// Total number of fit_on_grid invocations in this process (test hook for
// the fit-reuse contract in sweeps).
std::uint64_t fit_call_count();

}  // namespace metamix
