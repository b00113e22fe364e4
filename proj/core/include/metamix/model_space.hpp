// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <optional>
#include <string>

#include "metamix/mixture.hpp"
#include "metamix/nnhm.hpp"

namespace metamix {

enum class ModelId {
  M1,  // complete pooling: mu_T = mu_S, tau_T = tau_S
  M2,  // effect pooling:   mu_T = mu_S, tau_T != tau_S
  M3,  // heterogeneity pooling: mu_T != mu_S, tau_T = tau_S
  M4,  // standalone analyses
};

std::string to_string(ModelId id);

struct ModelFit {
  ModelId id{ModelId::M1};
  double log_marginal{0.0};
  NormalMixture target_mu_posterior;
};

struct AnalysisConfig {
  EffectPrior effect_prior{0.0, 2.0};
  HeterogeneityPrior heterogeneity_prior{HalfNormalPrior{0.5}};
  std::array<double, 4> model_prior{0.5, 0.0, 0.0, 0.5};
  double level{0.95};

  void validate() const;
};

ModelFit fit_m1(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg);

// Sequential (MAP) route for M1: source posterior becomes the target prior.
// Agrees with fit_m1 up to quadrature error.
ModelFit fit_m1_map(const Dataset& source, const Dataset& target,
                    const AnalysisConfig& cfg);

// Shared effect, independent heterogeneities; 2D quadrature over
// (tau_S, tau_T).
ModelFit fit_m2(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg);

// Shared heterogeneity only; MAP route via tau_prior_from_posterior.
ModelFit fit_m3(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg);

ModelFit fit_m4(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg);

ModelFit fit_model(ModelId id, const Dataset& source, const Dataset& target,
                   const AnalysisConfig& cfg);

// Fits for whichever of M1..M4 are flagged active; inactive slots stay empty.
struct ModelFitSet {
  std::array<std::optional<ModelFit>, 4> fits;
};

ModelFitSet fit_models(const Dataset& source, const Dataset& target,
                       const AnalysisConfig& cfg, const std::array<bool, 4>& active);

struct AnalysisResult {
  std::array<double, 4> prior_prob{};
  std::array<double, 4> log_marginal{};  // NaN for inactive models
  std::array<double, 4> posterior_prob{};
  NormalMixture pooled;
};

// Model-average the fitted components under the given prior probabilities;
// zero-probability models are skipped, never fitted.
AnalysisResult average_models(const ModelFitSet& fits, const std::array<double, 4>& priors);

// End-to-end: fit all models with positive prior probability, then average.
AnalysisResult analyze(const Dataset& source, const Dataset& target,
                       const AnalysisConfig& cfg);

}  // namespace metamix
