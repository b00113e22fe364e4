// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/sensitivity.hpp"

#include <cmath>

namespace metamix {

namespace {

SweepRow summarize(double setting, const AnalysisResult& res, double level) {
  SweepRow row;
  row.setting = setting;
  row.posterior_prob = res.posterior_prob;
  row.median = res.pooled.median();
  const Interval ci = res.pooled.shortest_interval(level);
  row.ci_low = ci.lower;
  row.ci_high = ci.upper;
  return row;
}

}  // namespace

std::vector<double> default_prior_prob_grid() {
  std::vector<double> g;
  g.reserve(101);
  for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
  return g;
}

std::vector<double> default_sd_grid() {
  std::vector<double> g;
  g.reserve(25);
  const double lo = std::log(0.5), hi = std::log(8.0);
  for (int i = 0; i < 25; ++i) g.push_back(std::exp(lo + (hi - lo) * i / 24.0));
  return g;
}

SweepResult sweep_prior_prob(const Dataset& source, const Dataset& target,
                             const AnalysisConfig& cfg, const std::vector<double>& grid) {
  cfg.validate();
  if (grid.empty()) throw InputError("sweep_prior_prob: empty grid");
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError("sweep_prior_prob: grid values must lie in [0, 1]");
    }
  }
  const ModelFitSet fits =
      fit_models(source, target, cfg, {true, false, false, true});

  SweepResult out{"p_m1", {}};
  out.rows.reserve(grid.size());
  for (double p : grid) {
    const AnalysisResult res = average_models(fits, {p, 0.0, 0.0, 1.0 - p});
    out.rows.push_back(summarize(p, res, cfg.level));
  }
  return out;
}

SweepResult sweep_vague_sd(const Dataset& source, const Dataset& target,
                           const AnalysisConfig& cfg, const std::vector<double>& grid) {
  cfg.validate();
  if (grid.empty()) throw InputError("sweep_vague_sd: empty grid");
  std::array<bool, 4> active{};
  for (std::size_t i = 0; i < 4; ++i) active[i] = cfg.model_prior[i] > 0.0;

  SweepResult out{"vague_sd", {}};
  out.rows.reserve(grid.size());
  for (double sd : grid) {
    if (!(sd > 0.0)) throw InputError("sweep_vague_sd: grid values must be positive");
    AnalysisConfig local = cfg;
    local.effect_prior.sd = sd;
    const AnalysisResult res =
        average_models(fit_models(source, target, local, active), local.model_prior);
    out.rows.push_back(summarize(sd, res, cfg.level));
  }
  return out;
}

const std::vector<ModelPriorPreset>& builtin_presets() {
  static const std::vector<ModelPriorPreset> presets = {
      {"I", {1.0, 0.0, 0.0, 0.0}},
      {"IV", {0.0, 0.0, 0.0, 1.0}},
      {"V", {0.25, 0.0, 0.0, 0.75}},
      {"VI", {0.5, 0.0, 0.0, 0.5}},
      {"VII", {0.75, 0.0, 0.0, 0.25}},
      {"VIII", {0.25, 0.0, 0.375, 0.375}},
      {"IX", {0.5, 0.0, 0.25, 0.25}},
      {"X", {0.75, 0.0, 0.125, 0.125}},
      {"XI", {0.25, 0.25, 0.25, 0.25}},
      {"XII", {0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0}},
      {"XIII", {0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0}},
  };
  return presets;
}

std::vector<PresetRow> preset_table(const Dataset& source, const Dataset& target,
                                    const AnalysisConfig& cfg,
                                    const std::vector<ModelPriorPreset>& presets) {
  cfg.validate();
  std::array<bool, 4> active{};
  for (const auto& preset : presets) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!(preset.prior[i] >= 0.0)) {
        throw InputError("preset_table: negative prior in preset " + preset.name);
      }
      sum += preset.prior[i];
      if (preset.prior[i] > 0.0) active[i] = true;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
      throw InputError("preset_table: preset " + preset.name + " does not sum to 1");
    }
  }

  const ModelFitSet fits = fit_models(source, target, cfg, active);
  std::vector<PresetRow> out;
  out.reserve(presets.size());
  for (const auto& preset : presets) {
    const AnalysisResult res = average_models(fits, preset.prior);
    PresetRow row;
    row.name = preset.name;
    row.prior_prob = preset.prior;
    row.posterior_prob = res.posterior_prob;
    row.median = res.pooled.median();
    const Interval ci = res.pooled.shortest_interval(cfg.level);
    row.ci_low = ci.lower;
    row.ci_high = ci.upper;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace metamix
