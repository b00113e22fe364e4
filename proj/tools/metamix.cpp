// Apache License, Version 2.0, refer to LICENSE.txt
//
// Command-line surface: escalc, analyze, sweep-prior, sweep-sd, presets,
// simulate, calibrate, forest. Exit codes: 0 ok, 2 input error,
// 3 numerical failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "metamix/csv.hpp"
#include "metamix/datasets.hpp"
#include "metamix/report.hpp"
#include "metamix/sim.hpp"
#include "metamix/svg.hpp"

namespace {

using namespace metamix;

struct InputOptions {
  std::string input_path;
  std::string schema = "counts";
  std::string builtin;
  std::string source_group;
  std::string target_group;
};

struct ConfigOptions {
  double prior_mean = 0.0;
  double prior_sd = 2.0;
  double tau_scale = 0.5;
  double pm1 = 0.5;
  std::vector<double> model_prior;  // overrides pm1 when given
  double level = 0.95;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool with_groups) {
  auto* input = cmd->add_option("-i,--input", in.input_path, "input CSV file");
  cmd->add_option("--schema", in.schema, "CSV schema: counts | precomputed")
      ->check(CLI::IsMember({"counts", "precomputed"}));
  cmd->add_option("--builtin", in.builtin,
                  "bundled dataset: migraine | transplant")
      ->excludes(input);
  if (with_groups) {
    cmd->add_option("--source-group", in.source_group,
                    "group label of the source studies");
    cmd->add_option("--target-group", in.target_group,
                    "group label of the target studies");
  }
}

void add_config_options(CLI::App* cmd, ConfigOptions& c) {
  cmd->add_option("--prior-mean", c.prior_mean, "vague effect prior mean");
  cmd->add_option("--prior-sd", c.prior_sd, "vague effect prior sd");
  cmd->add_option("--tau-scale", c.tau_scale, "half-normal heterogeneity prior scale");
  cmd->add_option("--pm1", c.pm1, "prior probability p(M1) in the M1/M4 setup");
  cmd->add_option("--model-prior", c.model_prior,
                  "explicit prior probabilities p(M1) p(M2) p(M3) p(M4)")
      ->expected(4);
  cmd->add_option("--level", c.level, "credible level");
}

AnalysisConfig build_config(const ConfigOptions& c) {
  AnalysisConfig cfg;
  cfg.effect_prior = {c.prior_mean, c.prior_sd};
  cfg.heterogeneity_prior = HalfNormalPrior{c.tau_scale};
  if (!c.model_prior.empty()) {
    for (std::size_t i = 0; i < 4; ++i) cfg.model_prior[i] = c.model_prior[i];
  } else {
    if (!(c.pm1 >= 0.0 && c.pm1 <= 1.0)) {
      throw InputError("--pm1 must lie in [0, 1]");
    }
    cfg.model_prior = {c.pm1, 0.0, 0.0, 1.0 - c.pm1};
  }
  cfg.validate();
  return cfg;
}

Dataset load_dataset(const InputOptions& in, std::string* dataset_name) {
  if (!in.builtin.empty()) {
    const BuiltinDataset b = builtin_dataset(in.builtin);
    if (dataset_name) *dataset_name = b.name;
    return escalc_dataset(b.tables);
  }
  if (in.input_path.empty()) {
    throw InputError("either --input or --builtin is required");
  }
  if (dataset_name) *dataset_name = "";
  if (in.schema == "precomputed") return load_precomputed_csv(in.input_path);
  return escalc_dataset(load_counts_csv(in.input_path));
}

std::pair<Dataset, Dataset> split_groups(const InputOptions& in, const Dataset& data,
                                         std::string* source_group,
                                         std::string* target_group) {
  std::string sg = in.source_group;
  std::string tg = in.target_group;
  if (!in.builtin.empty() && (sg.empty() || tg.empty())) {
    const BuiltinDataset b = builtin_dataset(in.builtin);
    if (sg.empty()) sg = b.source_group;
    if (tg.empty()) tg = b.target_group;
  }
  if (sg.empty() || tg.empty()) {
    throw InputError("--source-group and --target-group are required for file input");
  }
  Dataset source = filter_group(data, sg);
  Dataset target = filter_group(data, tg);
  if (source.empty()) throw InputError("source group '" + sg + "' not present in data");
  if (target.empty()) throw InputError("target group '" + tg + "' not present in data");
  *source_group = sg;
  *target_group = tg;
  return {std::move(source), std::move(target)};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << content;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << sweep.setting_name
     << ",post_m1,post_m2,post_m3,post_m4,median_logor,ci_low,ci_high\n";
  for (const auto& r : sweep.rows) {
    os << format_g17(r.setting);
    for (double p : r.posterior_prob) os << ',' << format_g17(p);
    os << ',' << format_g17(r.median) << ',' << format_g17(r.ci_low) << ','
       << format_g17(r.ci_high) << '\n';
  }
  return os.str();
}

std::string preset_csv(const std::vector<PresetRow>& rows) {
  std::ostringstream os;
  os << "preset,prior_m1,prior_m2,prior_m3,prior_m4,"
        "post_m1,post_m2,post_m3,post_m4,median_logor,ci_low,ci_high\n";
  for (const auto& r : rows) {
    os << r.name;
    for (double p : r.prior_prob) os << ',' << format_g17(p);
    for (double p : r.posterior_prob) os << ',' << format_g17(p);
    os << ',' << format_g17(r.median) << ',' << format_g17(r.ci_low) << ','
       << format_g17(r.ci_high) << '\n';
  }
  return os.str();
}

std::string simulation_csv(const SimulationResult& res) {
  std::ostringstream os;
  os << "scenario,preset,k_s,k_t,n_reps,seed,coverage_pct,mean_width,"
        "avg_p_m1,avg_p_m2,avg_p_m3,avg_p_m4,failures\n";
  for (const auto& row : res.rows) {
    os << res.scenario << ',' << row.preset << ',' << res.k_s << ',' << res.k_t << ','
       << res.n_reps << ',' << res.seed << ',' << format_g17(row.coverage_pct) << ','
       << format_g17(row.mean_width);
    for (double p : row.avg_posterior_prob) os << ',' << format_g17(p);
    os << ',' << res.failures << '\n';
  }
  return os.str();
}

std::vector<ModelPriorPreset> select_presets(const std::vector<std::string>& names) {
  if (names.empty()) return builtin_presets();
  std::vector<ModelPriorPreset> out;
  for (const auto& name : names) {
    bool found = false;
    for (const auto& p : builtin_presets()) {
      if (p.name == name) {
        out.push_back(p);
        found = true;
        break;
      }
    }
    if (!found) throw InputError("unknown preset '" + name + "'");
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"metamix: Bayesian model-averaged random-effects meta-analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key=value config file (flags win)");

  // escalc
  InputOptions esc_in;
  std::string esc_output;
  auto* escalc = app.add_subcommand("escalc", "compute log-OR effect sizes");
  add_input_options(escalc, esc_in, false);
  escalc->add_option("-o,--output", esc_output, "write effect sizes (precomputed CSV)");

  // analyze
  InputOptions ana_in;
  ConfigOptions ana_cfg;
  std::string ana_json;
  auto* analyze_cmd = app.add_subcommand("analyze", "model-averaged analysis");
  add_input_options(analyze_cmd, ana_in, true);
  add_config_options(analyze_cmd, ana_cfg);
  analyze_cmd->add_option("--json", ana_json, "write machine-readable report");

  // sweep-prior
  InputOptions swp_in;
  ConfigOptions swp_cfg;
  std::string swp_output, swp_svg_path;
  int swp_steps = 100;
  auto* sweep_prior =
      app.add_subcommand("sweep-prior", "sweep the prior probability p(M1)");
  add_input_options(sweep_prior, swp_in, true);
  add_config_options(sweep_prior, swp_cfg);
  sweep_prior->add_option("--steps", swp_steps, "number of grid intervals on [0,1]");
  sweep_prior->add_option("-o,--output", swp_output, "write sweep CSV");
  sweep_prior->add_option("--svg", swp_svg_path, "write sweep SVG plot");

  // sweep-sd
  InputOptions swd_in;
  ConfigOptions swd_cfg;
  std::string swd_output, swd_svg_path;
  auto* sweep_sd =
      app.add_subcommand("sweep-sd", "sweep the vague effect prior sd");
  add_input_options(sweep_sd, swd_in, true);
  add_config_options(sweep_sd, swd_cfg);
  sweep_sd->add_option("-o,--output", swd_output, "write sweep CSV");
  sweep_sd->add_option("--svg", swd_svg_path, "write sweep SVG plot");

  // presets
  InputOptions pre_in;
  ConfigOptions pre_cfg;
  std::string pre_output;
  std::vector<std::string> pre_names;
  auto* presets_cmd =
      app.add_subcommand("presets", "model-prior preset comparison table");
  add_input_options(presets_cmd, pre_in, true);
  add_config_options(presets_cmd, pre_cfg);
  presets_cmd->add_option("--rows", pre_names, "preset names (default: all)");
  presets_cmd->add_option("-o,--output", pre_output, "write preset CSV");

  // simulate
  std::string sim_scenario = "S1";
  std::vector<std::string> sim_presets;
  int sim_reps = 2000, sim_ks = 10, sim_kt = 3, sim_threads = 0;
  std::uint64_t sim_seed = 20180741;
  std::string sim_output;
  auto* simulate = app.add_subcommand("simulate", "coverage simulation study");
  simulate->add_option("--scenario", sim_scenario, "scenario S1..S4");
  simulate->add_option("--presets", sim_presets, "preset names (default: all)");
  simulate->add_option("--reps", sim_reps, "replications");
  simulate->add_option("--ks", sim_ks, "source study count");
  simulate->add_option("--kt", sim_kt, "target study count");
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--threads", sim_threads, "worker count (0 = auto)");
  simulate->add_option("-o,--output", sim_output, "write results CSV");

  // calibrate
  int cal_ks = 10, cal_kt = 3, cal_reps = 2000, cal_threads = 0;
  std::uint64_t cal_seed = 20180741;
  double cal_pm1 = 0.5;
  std::string cal_output;
  auto* calibrate = app.add_subcommand("calibrate", "prior-draw coverage calibration");
  calibrate->add_option("--ks", cal_ks, "source study count");
  calibrate->add_option("--kt", cal_kt, "target study count");
  calibrate->add_option("--reps", cal_reps, "replications");
  calibrate->add_option("--seed", cal_seed, "RNG seed");
  calibrate->add_option("--pm1", cal_pm1, "prior probability p(M1)");
  calibrate->add_option("--threads", cal_threads, "worker count (0 = auto)");
  calibrate->add_option("-o,--output", cal_output, "write result CSV");

  // forest
  InputOptions for_in;
  ConfigOptions for_cfg;
  std::string for_svg_path;
  auto* forest = app.add_subcommand("forest", "forest plot (text and SVG)");
  add_input_options(forest, for_in, true);
  add_config_options(forest, for_cfg);
  forest->add_option("--svg", for_svg_path, "write forest SVG plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[E_INPUT]: " << e.what() << '\n';
    return 2;
  }

  if (escalc->parsed()) {
    std::string name;
    const Dataset d = load_dataset(esc_in, &name);
    if (!esc_output.empty()) {
      std::ostringstream os;
      write_effects_csv(os, d);
      write_file(esc_output, os.str());
    }
    std::printf("%-28s %-12s %9s %9s\n", "study", "group", "log-OR", "se");
    for (const auto& e : d.estimates) {
      std::printf("%-28s %-12s %9.3f %9.3f\n", e.study_label.c_str(),
                  e.group_label.c_str(), e.y, e.se);
    }
    return 0;
  }

  if (analyze_cmd->parsed()) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string name, sg, tg;
    const Dataset all = load_dataset(ana_in, &name);
    const auto [source, target] = split_groups(ana_in, all, &sg, &tg);
    const AnalysisConfig cfg = build_config(ana_cfg);
    const AnalysisResult res = metamix::analyze(source, target, cfg);
    const RunReport report = make_report(source, target, cfg, res, name, sg, tg);
    if (!ana_json.empty()) {
      write_file(ana_json, report_json(report).dump(2) + "\n");
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    std::cout << report_text(report, secs);
    return 0;
  }

  if (sweep_prior->parsed()) {
    std::string name, sg, tg;
    const Dataset all = load_dataset(swp_in, &name);
    const auto [source, target] = split_groups(swp_in, all, &sg, &tg);
    const AnalysisConfig cfg = build_config(swp_cfg);
    if (swp_steps < 1) throw InputError("--steps must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i <= swp_steps; ++i) {
      grid.push_back(static_cast<double>(i) / swp_steps);
    }
    const SweepResult sweep = metamix::sweep_prior_prob(source, target, cfg, grid);
    if (!swp_output.empty()) write_file(swp_output, sweep_csv(sweep));
    if (!swp_svg_path.empty()) write_file(swp_svg_path, sweep_svg(sweep));
    std::cout << sweep_csv(sweep);
    return 0;
  }

  if (sweep_sd->parsed()) {
    std::string name, sg, tg;
    const Dataset all = load_dataset(swd_in, &name);
    const auto [source, target] = split_groups(swd_in, all, &sg, &tg);
    const AnalysisConfig cfg = build_config(swd_cfg);
    const SweepResult sweep =
        metamix::sweep_vague_sd(source, target, cfg, default_sd_grid());
    if (!swd_output.empty()) write_file(swd_output, sweep_csv(sweep));
    if (!swd_svg_path.empty()) write_file(swd_svg_path, sweep_svg(sweep));
    std::cout << sweep_csv(sweep);
    return 0;
  }

  if (presets_cmd->parsed()) {
    std::string name, sg, tg;
    const Dataset all = load_dataset(pre_in, &name);
    const auto [source, target] = split_groups(pre_in, all, &sg, &tg);
    const AnalysisConfig cfg = build_config(pre_cfg);
    const auto rows = preset_table(source, target, cfg, select_presets(pre_names));
    if (!pre_output.empty()) write_file(pre_output, preset_csv(rows));
    std::printf("%-6s %-22s %-28s %8s %18s\n", "row", "prior p(Mi)", "posterior p(Mi|y)",
                "OR", "CI");
    for (const auto& r : rows) {
      std::printf("%-6s %.2f/%.2f/%.2f/%.2f  %.3f/%.3f/%.3f/%.3f  %8.3f [%6.3f,%7.3f]\n",
                  r.name.c_str(), r.prior_prob[0], r.prior_prob[1], r.prior_prob[2],
                  r.prior_prob[3], r.posterior_prob[0], r.posterior_prob[1],
                  r.posterior_prob[2], r.posterior_prob[3], std::exp(r.median),
                  std::exp(r.ci_low), std::exp(r.ci_high));
    }
    return 0;
  }

  if (simulate->parsed()) {
    Scenario sc = builtin_scenario(sim_scenario);
    sc.k_s = sim_ks;
    sc.k_t = sim_kt;
    const SimulationResult res = run_scenario(sc, select_presets(sim_presets),
                                              sim_reps, sim_seed, sim_threads);
    const std::string csv = simulation_csv(res);
    if (!sim_output.empty()) write_file(sim_output, csv);
    std::cout << csv;
    return 0;
  }

  if (calibrate->parsed()) {
    AnalysisConfig cfg;
    if (!(cal_pm1 >= 0.0 && cal_pm1 <= 1.0)) throw InputError("--pm1 must lie in [0,1]");
    cfg.model_prior = {cal_pm1, 0.0, 0.0, 1.0 - cal_pm1};
    const CalibrationResult res =
        calibration_run(cfg, cal_ks, cal_kt, cal_reps, cal_seed, cal_threads);
    std::ostringstream os;
    os << "k_s,k_t,n_reps,seed,coverage_pct,failures\n"
       << res.k_s << ',' << res.k_t << ',' << res.n_reps << ',' << res.seed << ','
       << format_g17(res.coverage_pct) << ',' << res.failures << '\n';
    if (!cal_output.empty()) write_file(cal_output, os.str());
    std::cout << os.str();
    return 0;
  }

  if (forest->parsed()) {
    std::string name, sg, tg;
    const Dataset all = load_dataset(for_in, &name);
    const auto [source, target] = split_groups(for_in, all, &sg, &tg);
    const AnalysisConfig cfg = build_config(for_cfg);
    const AnalysisResult res = metamix::analyze(source, target, cfg);
    const double median = res.pooled.median();
    const Interval ci = res.pooled.shortest_interval(cfg.level);
    Dataset ordered = concatenate(source, target);
    if (!for_svg_path.empty()) {
      write_file(for_svg_path, forest_svg(ordered, median, ci, cfg.level));
    }
    std::cout << forest_text(ordered, median, ci, cfg.level);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const metamix::InputError& e) {
    std::cerr << "error[E_INPUT]: " << e.what() << '\n';
    return 2;
  } catch (const metamix::NumericalError& e) {
    std::cerr << "error[E_NUMERIC]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error[E_INTERNAL]: " << e.what() << '\n';
    return 3;
  }
}
