// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/effect_size.hpp"

#include <cmath>

#include "metamix/normal.hpp"

namespace metamix {

void TwoByTwoTable::validate() const {
  if (treat_total <= 0 || ctrl_total <= 0) {
    throw InputError("table '" + study_label + "': arm totals must be positive");
  }
  if (treat_events < 0 || treat_events > treat_total) {
    throw InputError("table '" + study_label + "': treatment events outside [0, total]");
  }
  if (ctrl_events < 0 || ctrl_events > ctrl_total) {
    throw InputError("table '" + study_label + "': control events outside [0, total]");
  }
}

EffectEstimate log_odds_ratio(const TwoByTwoTable& table) {
  table.validate();
  double a = static_cast<double>(table.treat_events);
  double b = static_cast<double>(table.treat_total - table.treat_events);
  double c = static_cast<double>(table.ctrl_events);
  double d = static_cast<double>(table.ctrl_total - table.ctrl_events);
  if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
  }
  EffectEstimate e;
  e.study_label = table.study_label;
  e.group_label = table.group_label;
  e.y = std::log((a * d) / (b * c));
  e.se = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
  return e;
}

Interval wald_ci(const EffectEstimate& e, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("wald_ci: level must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  return {e.y - z * e.se, e.y + z * e.se};
}

Dataset escalc_dataset(const std::vector<TwoByTwoTable>& tables) {
  if (tables.empty()) {
    throw InputError("escalc_dataset: empty table list");
  }
  Dataset out;
  out.estimates.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    try {
      out.estimates.push_back(log_odds_ratio(tables[i]));
    } catch (const InputError& err) {
      throw InputError("row " + std::to_string(i + 1) + ": " + err.what());
    }
  }
  return out;
}

Dataset filter_group(const Dataset& data, std::string_view group) {
  Dataset out;
  for (const auto& e : data.estimates) {
    if (e.group_label == group) out.estimates.push_back(e);
  }
  return out;
}

Dataset concatenate(const Dataset& a, const Dataset& b) {
  Dataset out = a;
  out.estimates.insert(out.estimates.end(), b.estimates.begin(), b.estimates.end());
  return out;
}

}  // namespace metamix
