// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/datasets.hpp"

#include "metamix/common.hpp"

namespace metamix {

const std::vector<TwoByTwoTable>& migraine_tables() {
  static const std::vector<TwoByTwoTable> tables = {
      {"Hamalainen (1997b)", "adolescents", 7, 23, 5, 23},
      {"Rothner (1997)", "adolescents", 113, 226, 46, 74},
      {"Winner (1997)", "adolescents", 111, 222, 32, 76},
      {"Rothner (1999a)", "adolescents", 96, 186, 20, 34},
      {"Rothner (1999b)", "adolescents", 17, 62, 7, 30},
      {"Rothner (1999c)", "adolescents", 23, 66, 14, 36},
      {"Winner (2000)", "adolescents", 243, 377, 69, 130},
      {"Winner (2002)", "adolescents", 98, 149, 80, 142},
      {"Ahonen (2004)", "adolescents", 53, 83, 32, 83},
      {"Visser (2004a)", "adolescents", 159, 233, 165, 240},
      {"Ahonen (2006)", "adolescents", 71, 96, 35, 96},
      {"Evers (2006)", "adolescents", 18, 29, 8, 29},
      {"Rothner (2006)", "adolescents", 262, 480, 93, 160},
      {"Winner (2006)", "adolescents", 316, 483, 141, 242},
      {"Callenbach (2007)", "adolescents", 19, 46, 15, 46},
      {"Lewis (2007)", "adolescents", 97, 148, 67, 127},
      {"Winner (2007)", "adolescents", 82, 144, 79, 133},
      {"Linder (2008)", "adolescents", 383, 544, 94, 170},
      {"Ho (2012)", "adolescents", 167, 284, 147, 286},
      {"Fujita (2014)", "adolescents", 23, 74, 27, 70},
      {"Ueberall (1999)", "children", 12, 14, 6, 14},
      {"Hamalainen (2002)", "children", 38, 59, 24, 58},
      {"Ho (2012)", "children", 53, 98, 57, 102},
  };
  return tables;
}

const std::vector<TwoByTwoTable>& transplant_tables() {
  static const std::vector<TwoByTwoTable> tables = {
      {"Washburn (2001)", "adults", 1, 15, 1, 15},
      {"Neuhaus (2002)", "adults", 74, 188, 88, 193},
      {"Yan (2004)", "adults", 3, 24, 9, 24},
      {"Boillot (2005)", "adults", 89, 351, 92, 347},
      {"Fasola (2005)", "adults", 13, 46, 11, 24},
      {"Yoshida (2005)", "adults", 17, 72, 21, 76},
      {"de Simone (2007)", "adults", 17, 95, 21, 95},
      {"Kato cohort 1 (2007)", "adults", 7, 15, 9, 16},
      {"Kato cohort 2 (2007)", "adults", 3, 16, 8, 23},
      {"Klintmalm (2007)", "adults", 80, 153, 46, 79},
      {"Schmeding (2007)", "adults", 29, 51, 25, 48},
      {"Lupo (2008)", "adults", 4, 26, 6, 21},
      {"Neuberger (2009)", "adults", 28, 168, 45, 168},
      {"Calmus (2010)", "adults", 23, 98, 24, 101},
      {"Heffron (2003)", "children", 14, 61, 15, 20},
      {"Spada (2006)", "children", 4, 36, 11, 36},
  };
  return tables;
}

BuiltinDataset builtin_dataset(const std::string& name) {
  if (name == "migraine") {
    return {"migraine", "adolescents", "children", migraine_tables()};
  }
  if (name == "transplant") {
    return {"transplant", "adults", "children", transplant_tables()};
  }
  throw InputError("unknown builtin dataset '" + name +
                   "' (expected 'migraine' or 'transplant')");
}

}  // namespace metamix
