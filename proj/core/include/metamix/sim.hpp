// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "metamix/model_space.hpp"
#include "metamix/sensitivity.hpp"

namespace metamix {

struct Scenario {
  std::string name;
  double mu_s{0.25};
  double tau_s{0.2};
  double mu_t{0.25};
  double tau_t{0.2};
  int k_s{10};
  int k_t{3};
  double se_low{0.2};
  double se_high{1.0};

  void validate() const;
};

// Scenarios S1..S4 with the default 10+3 study counts.
Scenario builtin_scenario(const std::string& name);

// Deterministic given (seed, rep_index); source and target use separate
// RNG streams so target draws are independent of k_s.
std::pair<Dataset, Dataset> generate_dataset(const Scenario& sc, std::uint64_t seed,
                                             std::uint64_t rep_index);

struct PresetSummary {
  std::string preset;
  std::array<double, 4> prior_prob{};
  double coverage_pct{0.0};
  double mean_width{0.0};
  std::array<double, 4> avg_posterior_prob{};
};

struct SimulationResult {
  std::string scenario;
  int k_s{0};
  int k_t{0};
  int n_reps{0};
  std::uint64_t seed{0};
  int failures{0};
  std::vector<PresetSummary> rows;
};

// Replications run in parallel; aggregation is rep-ordered so results are
// identical for any worker count. threads = 0 picks a default from the
// METAMIX_THREADS environment variable or hardware concurrency.
SimulationResult run_scenario(const Scenario& sc,
                              const std::vector<ModelPriorPreset>& presets, int n_reps,
                              std::uint64_t seed, int threads = 0);

struct CalibrationResult {
  int k_s{0};
  int k_t{0};
  int n_reps{0};
  std::uint64_t seed{0};
  int failures{0};
  double coverage_pct{0.0};
};

// Parameters are drawn from the analysis prior itself (shared between
// groups with probability p(M1), independent otherwise), so the credible
// intervals are exactly calibrated in the long run.
CalibrationResult calibration_run(const AnalysisConfig& cfg, int k_s, int k_t,
                                  int n_reps, std::uint64_t seed, int threads = 0);

int resolve_thread_count(int requested);

}  // namespace metamix
