// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "metamix/common.hpp"

namespace metamix {

// Raw event/total counts per arm for one study.
struct TwoByTwoTable {
  std::string study_label;
  std::string group_label;
  long treat_events{0};
  long treat_total{0};
  long ctrl_events{0};
  long ctrl_total{0};

  void validate() const;
};

// Per-study log odds ratio y with standard error se.
struct EffectEstimate {
  std::string study_label;
  std::string group_label;
  double y{0.0};
  double se{1.0};
};

struct Dataset {
  std::vector<EffectEstimate> estimates;

  std::size_t size() const { return estimates.size(); }
  bool empty() const { return estimates.empty(); }
};

// Log-OR with Wald standard error. Zero cells in the table get the
// Haldane-Anscombe 0.5 correction applied to all four cells.
EffectEstimate log_odds_ratio(const TwoByTwoTable& table);

Interval wald_ci(const EffectEstimate& e, double level);

// Element-wise log_odds_ratio, order preserved. Rejects empty input and
// reports the offending row index on failure.
Dataset escalc_dataset(const std::vector<TwoByTwoTable>& tables);

Dataset filter_group(const Dataset& data, std::string_view group);

Dataset concatenate(const Dataset& a, const Dataset& b);

}  // namespace metamix
