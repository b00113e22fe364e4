// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "metamix/csv.hpp"

namespace metamix {

namespace {

constexpr std::array<const char*, 4> kModelNames = {"M1", "M2", "M3", "M4"};

nlohmann::ordered_json heterogeneity_prior_json(const HeterogeneityPrior& prior) {
  nlohmann::ordered_json j;
  if (const auto* hn = std::get_if<HalfNormalPrior>(&prior)) {
    j["type"] = "half_normal";
    j["scale"] = hn->scale;
  } else {
    const auto& tab = std::get<TabulatedPrior>(prior);
    j["type"] = "tabulated";
    j["points"] = tab.support.size();
  }
  return j;
}

}  // namespace

std::string dataset_hash(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto absorb = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ull;
  };
  for (const auto& e : data.estimates) {
    absorb(e.study_label);
    absorb(e.group_label);
    absorb(format_g17(e.y));
    absorb(format_g17(e.se));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport make_report(const Dataset& source, const Dataset& target,
                      const AnalysisConfig& cfg, const AnalysisResult& result,
                      const std::string& dataset_name, const std::string& source_group,
                      const std::string& target_group) {
  RunReport r;
  r.dataset_name = dataset_name;
  r.source_group = source_group;
  r.target_group = target_group;
  r.k_source = static_cast<int>(source.size());
  r.k_target = static_cast<int>(target.size());
  r.source_hash = dataset_hash(source);
  r.target_hash = dataset_hash(target);
  r.config = cfg;
  r.result = result;
  r.level = cfg.level;
  r.median_log_or = result.pooled.median();
  r.ci_log_or = result.pooled.shortest_interval(cfg.level);
  return r;
}

nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["version"] = r.version;
  j["input"] = {{"dataset", r.dataset_name},
                {"source_group", r.source_group},
                {"target_group", r.target_group},
                {"k_source", r.k_source},
                {"k_target", r.k_target},
                {"source_hash", r.source_hash},
                {"target_hash", r.target_hash}};
  j["config"] = {{"effect_prior", {{"mean", r.config.effect_prior.mean},
                                   {"sd", r.config.effect_prior.sd}}},
                 {"heterogeneity_prior", heterogeneity_prior_json(r.config.heterogeneity_prior)},
                 {"model_prior", r.config.model_prior},
                 {"level", r.config.level}};

  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(r.result.prior_prob[i] > 0.0)) continue;
    models.push_back({{"id", kModelNames[i]},
                      {"prior_prob", r.result.prior_prob[i]},
                      {"log_marginal", r.result.log_marginal[i]},
                      {"posterior_prob", r.result.posterior_prob[i]}});
  }
  j["models"] = models;

  nlohmann::ordered_json bfs = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (r.result.prior_prob[a] > 0.0 && r.result.prior_prob[b] > 0.0) {
        bfs.push_back({{"numerator", kModelNames[a]},
                       {"denominator", kModelNames[b]},
                       {"bf", bayes_factor(r.result.log_marginal[a],
                                           r.result.log_marginal[b])}});
      }
    }
  }
  j["bayes_factors"] = bfs;

  j["target_effect"] = {
      {"level", r.level},
      {"log_or", {{"median", r.median_log_or},
                  {"ci_low", r.ci_log_or.lower},
                  {"ci_high", r.ci_log_or.upper}}},
      {"or", {{"median", std::exp(r.median_log_or)},
              {"ci_low", std::exp(r.ci_log_or.lower)},
              {"ci_high", std::exp(r.ci_log_or.upper)}}}};
  return j;
}

std::string report_text(const RunReport& r, double wall_seconds) {
  std::ostringstream os;
  os << "metamix " << r.version << " analysis report\n";
  os << "  dataset: " << (r.dataset_name.empty() ? "(file)" : r.dataset_name)
     << "  source=" << r.source_group << " (k=" << r.k_source << ")"
     << "  target=" << r.target_group << " (k=" << r.k_target << ")\n";
  os << "  effect prior: Normal(" << r.config.effect_prior.mean << ", "
     << r.config.effect_prior.sd << "^2), level " << r.level << "\n\n";
  char line[160];
  os << "  model   p(M)      log marginal    p(M|y)\n";
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(r.result.prior_prob[i] > 0.0)) continue;
    std::snprintf(line, sizeof(line), "  %-6s  %-8.4f  %-14.6f  %.4f\n", kModelNames[i],
                  r.result.prior_prob[i], r.result.log_marginal[i],
                  r.result.posterior_prob[i]);
    os << line;
  }
  os << '\n';
  std::snprintf(line, sizeof(line),
                "  target log-OR: %.4f  [%.4f, %.4f] (shortest %g%% CI)\n",
                r.median_log_or, r.ci_log_or.lower, r.ci_log_or.upper, 100.0 * r.level);
  os << line;
  std::snprintf(line, sizeof(line), "  target OR:     %.4f  [%.4f, %.4f]\n",
                std::exp(r.median_log_or), std::exp(r.ci_log_or.lower),
                std::exp(r.ci_log_or.upper));
  os << line;
  std::snprintf(line, sizeof(line), "  wall time: %.3f s\n", wall_seconds);
  os << line;
  return os.str();
}

}  // namespace metamix
