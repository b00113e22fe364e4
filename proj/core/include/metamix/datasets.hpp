// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>
#include <vector>

#include "metamix/effect_size.hpp"

namespace metamix {

// Triptans vs. placebo for acute migraine (headache relief); 20 adolescent
// and 3 paediatric randomized studies.
const std::vector<TwoByTwoTable>& migraine_tables();

// IL-2 receptor antagonists after liver transplantation (acute rejection);
// 14 adult and 2 paediatric randomized studies.
const std::vector<TwoByTwoTable>& transplant_tables();

struct BuiltinDataset {
  std::string name;
  std::string source_group;
  std::string target_group;
  const std::vector<TwoByTwoTable>& tables;
};

// Lookup by name ("migraine" or "transplant").
BuiltinDataset builtin_dataset(const std::string& name);

}  // namespace metamix
