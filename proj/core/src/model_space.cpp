// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/model_space.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "metamix/normal.hpp"

namespace metamix {

namespace {

constexpr std::size_t kM2MinIntervals = 256;
constexpr std::size_t kM2MaxIntervals = 2048;
constexpr double kM2Tol = 1e-5;
constexpr double kM2PruneWeight = 1e-16;

void check_pair(const Dataset& source, const Dataset& target) {
  if (source.empty() || target.empty()) {
    throw InputError("model fit: source and target datasets must be non-empty");
  }
}

struct M2Eval {
  double log_marginal;
  std::vector<NormalComponent> components;  // only kept on the final pass
};

// Joint evidence over the (tau_S, tau_T) product grid with one shared mu.
M2Eval m2_on_grids(const Dataset& source, const Dataset& target,
                   const EffectPrior& prior, const TauGrid& gs, const TauGrid& gt,
                   bool keep_components) {
  const double w0 = 1.0 / (prior.sd * prior.sd);
  const double k = static_cast<double>(source.size() + target.size());

  // Per-axis per-study sufficient statistics.
  struct Partial {
    double wsum, b, c, log_w;
  };
  const auto partials = [](const Dataset& d, const std::vector<double>& taus) {
    std::vector<Partial> out(taus.size());
    for (std::size_t j = 0; j < taus.size(); ++j) {
      const double t2 = taus[j] * taus[j];
      Partial p{0.0, 0.0, 0.0, 0.0};
      for (const auto& e : d.estimates) {
        const double w = 1.0 / (e.se * e.se + t2);
        p.wsum += w;
        p.b += w * e.y;
        p.c += w * e.y * e.y;
        p.log_w += std::log(w);
      }
      out[j] = p;
    }
    return out;
  };
  const std::vector<Partial> ps = partials(source, gs.tau);
  const std::vector<Partial> pt = partials(target, gt.tau);

  std::vector<double> lw(gs.size() * gt.size(),
                         -std::numeric_limits<double>::infinity());
  std::vector<double> means(lw.size()), sds(lw.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (gs.prior_mass[i] <= 0.0) continue;
    const double lmass_s = std::log(gs.prior_mass[i]);
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (gt.prior_mass[j] <= 0.0) continue;
      const double wsum = w0 + ps[i].wsum + pt[j].wsum;
      const double b = w0 * prior.mean + ps[i].b + pt[j].b;
      const double c = w0 * prior.mean * prior.mean + ps[i].c + pt[j].c;
      const double log_cond = -0.5 * k * kLogTwoPi +
                              0.5 * (std::log(w0) + ps[i].log_w + pt[j].log_w -
                                     std::log(wsum)) -
                              0.5 * (c - b * b / wsum);
      const std::size_t idx = i * gt.size() + j;
      lw[idx] = lmass_s + std::log(gt.prior_mass[j]) + log_cond;
      means[idx] = b / wsum;
      sds[idx] = std::sqrt(1.0 / wsum);
    }
  }

  M2Eval out{log_sum_exp(lw), {}};
  if (!std::isfinite(out.log_marginal)) {
    throw NumericalError("fit_m2: non-finite log marginal likelihood");
  }
  if (keep_components) {
    std::vector<NormalComponent> comps;
    comps.reserve(lw.size());
    double kept = 0.0;
    for (std::size_t idx = 0; idx < lw.size(); ++idx) {
      if (!std::isfinite(lw[idx])) continue;
      const double w = std::exp(lw[idx] - out.log_marginal);
      if (w < kM2PruneWeight) continue;
      comps.push_back({w, means[idx], sds[idx]});
      kept += w;
    }
    for (auto& c : comps) c.weight /= kept;
    out.components = std::move(comps);
  }
  return out;
}

}  // namespace

std::string to_string(ModelId id) {
  switch (id) {
    case ModelId::M1: return "M1";
    case ModelId::M2: return "M2";
    case ModelId::M3: return "M3";
    case ModelId::M4: return "M4";
  }
  throw InputError("unknown ModelId");
}

void AnalysisConfig::validate() const {
  if (!(effect_prior.sd > 0.0) || !std::isfinite(effect_prior.sd)) {
    throw InputError("AnalysisConfig: effect prior sd must be positive");
  }
  double sum = 0.0;
  for (double p : model_prior) {
    if (!(p >= 0.0)) throw InputError("AnalysisConfig: negative model prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw InputError("AnalysisConfig: model priors must sum to 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("AnalysisConfig: credible level must lie in (0, 1)");
  }
}

ModelFit fit_m1(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg) {
  check_pair(source, target);
  NNHMFit f = fit(concatenate(source, target), cfg.effect_prior, cfg.heterogeneity_prior);
  return ModelFit{ModelId::M1, f.log_marginal, std::move(f.mu_posterior)};
}

ModelFit fit_m1_map(const Dataset& source, const Dataset& target,
                    const AnalysisConfig& cfg) {
  check_pair(source, target);
  const NNHMFit src = fit(source, cfg.effect_prior, cfg.heterogeneity_prior);
  NNHMFit tgt = fit(target, posterior_as_prior(src));
  return ModelFit{ModelId::M1, src.log_marginal + tgt.log_marginal,
                  std::move(tgt.mu_posterior)};
}

ModelFit fit_m2(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg) {
  check_pair(source, target);

  const bool point_mass = [&] {
    const auto* tab = std::get_if<TabulatedPrior>(&cfg.heterogeneity_prior);
    return tab != nullptr && tab->support.size() == 1;
  }();

  std::size_t intervals = kM2MinIntervals;
  TauGrid gs = make_uniform_grid(cfg.heterogeneity_prior, intervals);
  TauGrid gt = gs;
  if (point_mass) {
    const M2Eval e = m2_on_grids(source, target, cfg.effect_prior, gs, gt, true);
    return ModelFit{ModelId::M2, e.log_marginal, NormalMixture(e.components)};
  }

  double logm = m2_on_grids(source, target, cfg.effect_prior, gs, gt, false).log_marginal;
  while (true) {
    const std::size_t next = intervals * 2;
    if (next > kM2MaxIntervals) {
      throw NumericalError("fit_m2: no convergence at " +
                           std::to_string(kM2MaxIntervals) + " intervals per axis");
    }
    const TauGrid fs = make_uniform_grid(cfg.heterogeneity_prior, next);
    const double logm_fine =
        m2_on_grids(source, target, cfg.effect_prior, fs, fs, false).log_marginal;
    if (std::abs(logm_fine - logm) < kM2Tol) break;
    intervals = next;
    gs = fs;
    gt = fs;
    logm = logm_fine;
  }

  const M2Eval e = m2_on_grids(source, target, cfg.effect_prior, gs, gt, true);
  return ModelFit{ModelId::M2, e.log_marginal, NormalMixture(e.components)};
}

ModelFit fit_m3(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg) {
  check_pair(source, target);
  const NNHMFit src = fit(source, cfg.effect_prior, cfg.heterogeneity_prior);
  const TabulatedPrior tau_prior = tau_prior_from_posterior(src);
  NNHMFit tgt = fit(target, cfg.effect_prior, HeterogeneityPrior{tau_prior});
  return ModelFit{ModelId::M3, src.log_marginal + tgt.log_marginal,
                  std::move(tgt.mu_posterior)};
}

ModelFit fit_m4(const Dataset& source, const Dataset& target, const AnalysisConfig& cfg) {
  check_pair(source, target);
  const NNHMFit src = fit(source, cfg.effect_prior, cfg.heterogeneity_prior);
  NNHMFit tgt = fit(target, cfg.effect_prior, cfg.heterogeneity_prior);
  return ModelFit{ModelId::M4, src.log_marginal + tgt.log_marginal,
                  std::move(tgt.mu_posterior)};
}

ModelFit fit_model(ModelId id, const Dataset& source, const Dataset& target,
                   const AnalysisConfig& cfg) {
  switch (id) {
    case ModelId::M1: return fit_m1(source, target, cfg);
    case ModelId::M2: return fit_m2(source, target, cfg);
    case ModelId::M3: return fit_m3(source, target, cfg);
    case ModelId::M4: return fit_m4(source, target, cfg);
  }
  throw InputError("unknown ModelId");
}

ModelFitSet fit_models(const Dataset& source, const Dataset& target,
                       const AnalysisConfig& cfg, const std::array<bool, 4>& active) {
  ModelFitSet out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (active[i]) {
      out.fits[i] = fit_model(static_cast<ModelId>(i), source, target, cfg);
    }
  }
  return out;
}

AnalysisResult average_models(const ModelFitSet& fits, const std::array<double, 4>& priors) {
  std::vector<WeightedPosterior> active;
  std::vector<double> active_priors;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < 4; ++i) {
    if (priors[i] > 0.0) {
      if (!fits.fits[i]) {
        throw InputError("average_models: model " +
                         to_string(static_cast<ModelId>(i)) +
                         " has positive prior but no fit");
      }
      active.push_back({to_string(static_cast<ModelId>(i)),
                        fits.fits[i]->log_marginal, fits.fits[i]->target_mu_posterior});
      active_priors.push_back(priors[i]);
      slots.push_back(i);
    }
  }
  const ModelAverage avg = average(active, active_priors);

  AnalysisResult out{
      priors,
      {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
       std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()},
      {0.0, 0.0, 0.0, 0.0},
      avg.pooled};
  for (std::size_t k = 0; k < slots.size(); ++k) {
    out.log_marginal[slots[k]] = avg.models[k].log_marginal;
    out.posterior_prob[slots[k]] = avg.models[k].posterior_prob;
  }
  return out;
}

AnalysisResult analyze(const Dataset& source, const Dataset& target,
                       const AnalysisConfig& cfg) {
  cfg.validate();
  std::array<bool, 4> active{};
  for (std::size_t i = 0; i < 4; ++i) active[i] = cfg.model_prior[i] > 0.0;
  return average_models(fit_models(source, target, cfg, active), cfg.model_prior);
}

}  // namespace metamix
