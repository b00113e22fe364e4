// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <string>
#include <vector>

#include "metamix/model_space.hpp"

namespace metamix {

struct SweepRow {
  double setting{0.0};
  std::array<double, 4> posterior_prob{};
  double median{0.0};  // log-OR scale
  double ci_low{0.0};
  double ci_high{0.0};
};

struct SweepResult {
  std::string setting_name;
  std::vector<SweepRow> rows;
};

// Two-component setup p(M4) = 1 - p(M1); the M1 and M4 fits are computed
// once and reweighted per grid point. Boundary points drop the
// zero-probability component.
SweepResult sweep_prior_prob(const Dataset& source, const Dataset& target,
                             const AnalysisConfig& cfg, const std::vector<double>& grid);

// Rebuilds the vague effect prior per grid point and refits all active models.
SweepResult sweep_vague_sd(const Dataset& source, const Dataset& target,
                           const AnalysisConfig& cfg, const std::vector<double>& grid);

std::vector<double> default_prior_prob_grid();  // 0 to 1, step 0.01
std::vector<double> default_sd_grid();          // log-spaced, 0.5 to 8, 25 points

struct PresetRow {
  std::string name;
  std::array<double, 4> prior_prob{};
  std::array<double, 4> posterior_prob{};
  double median{0.0};  // log-OR scale
  double ci_low{0.0};
  double ci_high{0.0};
};

struct ModelPriorPreset {
  std::string name;
  std::array<double, 4> prior{};
};

// Rows I, IV..XIII: the standard prior-probability presets.
const std::vector<ModelPriorPreset>& builtin_presets();

// One model average per preset row, reusing the four model fits across rows.
std::vector<PresetRow> preset_table(const Dataset& source, const Dataset& target,
                                    const AnalysisConfig& cfg,
                                    const std::vector<ModelPriorPreset>& presets);

}  // namespace metamix
