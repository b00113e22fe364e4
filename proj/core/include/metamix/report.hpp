// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>

#include <json.hpp>

#include "metamix/model_space.hpp"

namespace metamix {

// Machine-readable analysis summary. Fully determined by the inputs: no
// timestamps or timing inside, so identical runs serialize byte-identically.
struct RunReport {
  std::string dataset_name;
  std::string source_group;
  std::string target_group;
  int k_source{0};
  int k_target{0};
  std::string source_hash;
  std::string target_hash;
  AnalysisConfig config;
  AnalysisResult result;
  double median_log_or{0.0};
  Interval ci_log_or;
  double level{0.95};
  std::string version{kVersion};
};

RunReport make_report(const Dataset& source, const Dataset& target,
                      const AnalysisConfig& cfg, const AnalysisResult& result,
                      const std::string& dataset_name, const std::string& source_group,
                      const std::string& target_group);

nlohmann::ordered_json report_json(const RunReport& report);

std::string report_text(const RunReport& report, double wall_seconds);

// FNV-1a over the study labels and 17-digit-formatted effect values.
std::string dataset_hash(const Dataset& data);

}  // namespace metamix
