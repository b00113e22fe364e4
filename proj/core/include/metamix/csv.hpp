// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "metamix/effect_size.hpp"

namespace metamix {

// Counts schema: study,patients,treat_events,treat_total,ctrl_events,ctrl_total
std::vector<TwoByTwoTable> parse_counts_csv(std::istream& in);
std::vector<TwoByTwoTable> load_counts_csv(const std::string& path);

// Precomputed schema: study,patients,y,se
Dataset parse_precomputed_csv(std::istream& in);
Dataset load_precomputed_csv(const std::string& path);

void write_counts_csv(std::ostream& out, const std::vector<TwoByTwoTable>& tables);
void write_effects_csv(std::ostream& out, const Dataset& data);

// printf %.17g; round-trip exact for doubles.
std::string format_g17(double x);

}  // namespace metamix
