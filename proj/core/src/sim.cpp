// Apache License, Version 2.0, refer to LICENSE.txt
#include "metamix/sim.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "metamix/rng.hpp"

namespace metamix {

namespace {

// Compensated (Kahan) accumulator; aggregation stays order-independent
// in exact arithmetic and rep-ordered here anyway.
struct KahanSum {
  double sum{0.0};
  double comp{0.0};

  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

struct PresetRepRecord {
  bool covered{false};
  double width{0.0};
  std::array<double, 4> posterior_prob{};
};

struct RepRecord {
  bool ok{false};
  std::vector<PresetRepRecord> presets;
};

void run_parallel(int n_reps, int threads, const std::function<void(int)>& body) {
  if (threads <= 1) {
    for (int r = 0; r < n_reps; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int r = t; r < n_reps; r += threads) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

Dataset generate_group(SplitRng& rng, double mu, double tau, int k, double se_low,
                       double se_high, const char* group) {
  Dataset d;
  d.estimates.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    EffectEstimate e;
    e.study_label = std::string(group) + "-" + std::to_string(i + 1);
    e.group_label = group;
    e.se = rng.next_uniform(se_low, se_high);
    e.y = rng.next_normal(mu, std::sqrt(tau * tau + e.se * e.se));
    d.estimates.push_back(std::move(e));
  }
  return d;
}

}  // namespace

void Scenario::validate() const {
  if (!(tau_s >= 0.0 && tau_t >= 0.0)) throw InputError("Scenario: tau must be >= 0");
  if (k_s < 1 || k_t < 1) throw InputError("Scenario: study counts must be >= 1");
  if (!(se_low > 0.0 && se_low <= se_high)) {
    throw InputError("Scenario: need 0 < se_low <= se_high");
  }
}

Scenario builtin_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "S1") {
    sc.mu_t = 0.25;
    sc.tau_t = 0.2;
  } else if (name == "S2") {
    sc.mu_t = 0.25;
    sc.tau_t = 0.5;
  } else if (name == "S3") {
    sc.mu_t = 1.0;
    sc.tau_t = 0.2;
  } else if (name == "S4") {
    sc.mu_t = 1.0;
    sc.tau_t = 0.5;
  } else {
    throw InputError("unknown scenario '" + name + "' (expected S1..S4)");
  }
  return sc;
}

std::pair<Dataset, Dataset> generate_dataset(const Scenario& sc, std::uint64_t seed,
                                             std::uint64_t rep_index) {
  sc.validate();
  SplitRng rng_s(seed, rep_index, 0);
  SplitRng rng_t(seed, rep_index, 1);
  return {generate_group(rng_s, sc.mu_s, sc.tau_s, sc.k_s, sc.se_low, sc.se_high, "source"),
          generate_group(rng_t, sc.mu_t, sc.tau_t, sc.k_t, sc.se_low, sc.se_high, "target")};
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("METAMIX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SimulationResult run_scenario(const Scenario& sc,
                              const std::vector<ModelPriorPreset>& presets, int n_reps,
                              std::uint64_t seed, int threads) {
  sc.validate();
  if (n_reps < 1) throw InputError("run_scenario: n_reps must be >= 1");
  if (presets.empty()) throw InputError("run_scenario: no presets given");

  AnalysisConfig cfg;  // vague defaults
  std::array<bool, 4> active{};
  for (const auto& p : presets) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (p.prior[i] > 0.0) active[i] = true;
    }
  }

  std::vector<RepRecord> records(static_cast<std::size_t>(n_reps));
  const auto body = [&](int rep) {
    RepRecord& rec = records[static_cast<std::size_t>(rep)];
    rec.presets.resize(presets.size());
    try {
      const auto [source, target] =
          generate_dataset(sc, seed, static_cast<std::uint64_t>(rep));
      const ModelFitSet fits = fit_models(source, target, cfg, active);
      for (std::size_t p = 0; p < presets.size(); ++p) {
        const AnalysisResult res = average_models(fits, presets[p].prior);
        const Interval ci = res.pooled.shortest_interval(cfg.level);
        rec.presets[p].covered = (ci.lower <= sc.mu_t && sc.mu_t <= ci.upper);
        rec.presets[p].width = ci.width();
        rec.presets[p].posterior_prob = res.posterior_prob;
      }
      rec.ok = true;
    } catch (const std::exception&) {
      rec.ok = false;
    }
  };
  run_parallel(n_reps, resolve_thread_count(threads), body);

  SimulationResult out;
  out.scenario = sc.name;
  out.k_s = sc.k_s;
  out.k_t = sc.k_t;
  out.n_reps = n_reps;
  out.seed = seed;

  int n_ok = 0;
  std::vector<long> cover(presets.size(), 0);
  std::vector<KahanSum> width(presets.size());
  std::vector<std::array<KahanSum, 4>> probs(presets.size());
  for (const auto& rec : records) {
    if (!rec.ok) {
      ++out.failures;
      continue;
    }
    ++n_ok;
    for (std::size_t p = 0; p < presets.size(); ++p) {
      cover[p] += rec.presets[p].covered ? 1 : 0;
      width[p].add(rec.presets[p].width);
      for (std::size_t m = 0; m < 4; ++m) {
        probs[p][m].add(rec.presets[p].posterior_prob[m]);
      }
    }
  }
  if (n_ok == 0) throw NumericalError("run_scenario: all replications failed");

  for (std::size_t p = 0; p < presets.size(); ++p) {
    PresetSummary s;
    s.preset = presets[p].name;
    s.prior_prob = presets[p].prior;
    s.coverage_pct = 100.0 * static_cast<double>(cover[p]) / n_ok;
    s.mean_width = width[p].sum / n_ok;
    for (std::size_t m = 0; m < 4; ++m) s.avg_posterior_prob[m] = probs[p][m].sum / n_ok;
    out.rows.push_back(std::move(s));
  }
  return out;
}

CalibrationResult calibration_run(const AnalysisConfig& cfg, int k_s, int k_t,
                                  int n_reps, std::uint64_t seed, int threads) {
  cfg.validate();
  if (n_reps < 1) throw InputError("calibration_run: n_reps must be >= 1");
  if (k_s < 1 || k_t < 1) throw InputError("calibration_run: study counts must be >= 1");
  if (cfg.model_prior[1] != 0.0 || cfg.model_prior[2] != 0.0) {
    throw InputError("calibration_run: requires a two-component (M1/M4) config");
  }
  const auto* hn = std::get_if<HalfNormalPrior>(&cfg.heterogeneity_prior);
  if (hn == nullptr) {
    throw InputError("calibration_run: requires a half-normal heterogeneity prior");
  }
  const double p_share = cfg.model_prior[0];

  std::vector<signed char> covered(static_cast<std::size_t>(n_reps), -1);
  const auto body = [&](int rep) {
    try {
      SplitRng rng_param(seed, static_cast<std::uint64_t>(rep), 2);
      const bool share = rng_param.next_unit() < p_share;
      Scenario sc;
      sc.name = "calibration";
      sc.k_s = k_s;
      sc.k_t = k_t;
      sc.mu_s = rng_param.next_normal(cfg.effect_prior.mean, cfg.effect_prior.sd);
      sc.tau_s = rng_param.next_half_normal(hn->scale);
      if (share) {
        sc.mu_t = sc.mu_s;
        sc.tau_t = sc.tau_s;
      } else {
        sc.mu_t = rng_param.next_normal(cfg.effect_prior.mean, cfg.effect_prior.sd);
        sc.tau_t = rng_param.next_half_normal(hn->scale);
      }
      const auto [source, target] =
          generate_dataset(sc, seed, static_cast<std::uint64_t>(rep));
      const AnalysisResult res = analyze(source, target, cfg);
      const Interval ci = res.pooled.shortest_interval(cfg.level);
      covered[static_cast<std::size_t>(rep)] =
          (ci.lower <= sc.mu_t && sc.mu_t <= ci.upper) ? 1 : 0;
    } catch (const std::exception&) {
      covered[static_cast<std::size_t>(rep)] = -1;
    }
  };
  run_parallel(n_reps, resolve_thread_count(threads), body);

  CalibrationResult out;
  out.k_s = k_s;
  out.k_t = k_t;
  out.n_reps = n_reps;
  out.seed = seed;
  long hits = 0;
  int n_ok = 0;
  for (signed char c : covered) {
    if (c < 0) {
      ++out.failures;
    } else {
      ++n_ok;
      hits += c;
    }
  }
  if (n_ok == 0) throw NumericalError("calibration_run: all replications failed");
  out.coverage_pct = 100.0 * static_cast<double>(hits) / n_ok;
  return out;
}

}  // namespace metamix
