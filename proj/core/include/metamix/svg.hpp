// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>

#include "metamix/effect_size.hpp"
#include "metamix/sensitivity.hpp"

namespace metamix {

// Per-study OR with Wald CI on a log axis plus one combined-estimate row.
// Layout is deterministic.
std::string forest_svg(const Dataset& data, double combined_median_log,
                       const Interval& combined_ci_log, double level);

std::string forest_text(const Dataset& data, double combined_median_log,
                        const Interval& combined_ci_log, double level);

// Median line with CI band over the sweep setting.
std::string sweep_svg(const SweepResult& sweep);

}  // namespace metamix
