// Apache License, Version 2.0, refer to LICENSE.txt
#include <cmath>
#include <sstream>

#include <doctest.h>

#include "metamix/csv.hpp"
#include "metamix/rng.hpp"
#include "metamix/sim.hpp"

using namespace metamix;

namespace {

std::string summarize(const SimulationResult& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    os << row.preset << ' ' << format_g17(row.coverage_pct) << ' '
       << format_g17(row.mean_width);
    for (double p : row.avg_posterior_prob) os << ' ' << format_g17(p);
    os << '\n';
  }
  return os.str();
}

std::vector<ModelPriorPreset> preset(const std::string& name) {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return {p};
  }
  throw std::logic_error("unknown preset");
}

}  // namespace

TEST_CASE("counter RNG is reproducible and stream-independent") {
  SplitRng a(123, 5, 1);
  SplitRng b(123, 5, 1);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  SplitRng c(123, 5, 2);
  CHECK(SplitRng(123, 5, 1).next_u64() != c.next_u64());
}

TEST_CASE("RNG moments are sane") {
  SplitRng rng(9, 0, 0);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sq += z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("generated datasets respect the scenario") {
  const Scenario sc = builtin_scenario("S1");
  const auto [source, target] = generate_dataset(sc, 7, 0);
  CHECK(source.size() == 10);
  CHECK(target.size() == 3);
  for (const auto& e : concatenate(source, target).estimates) {
    CHECK(e.se >= sc.se_low);
    CHECK(e.se <= sc.se_high);
    CHECK(std::isfinite(e.y));
  }
  // Deterministic per (seed, rep).
  const auto [s2, t2] = generate_dataset(sc, 7, 0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    CHECK(source.estimates[i].y == s2.estimates[i].y);
    CHECK(source.estimates[i].se == s2.estimates[i].se);
  }
  const auto [s3, t3] = generate_dataset(sc, 7, 1);
  CHECK(source.estimates[0].y != s3.estimates[0].y);
}

TEST_CASE("target draws do not depend on the source study count") {
  Scenario a = builtin_scenario("S2");
  Scenario b = a;
  b.k_s = 25;
  const auto [sa, ta] = generate_dataset(a, 11, 3);
  const auto [sb, tb] = generate_dataset(b, 11, 3);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta.estimates[i].y == tb.estimates[i].y);
    CHECK(ta.estimates[i].se == tb.estimates[i].se);
  }
}

TEST_CASE("simulated effects have the right dispersion") {
  // With tau_T = 0 the draws are N(mu_T, se_i); standardized residuals are
  // standard normal.
  Scenario sc = builtin_scenario("S1");
  sc.tau_s = 0.0;
  sc.tau_t = 0.0;
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto [source, target] = generate_dataset(sc, 31, rep);
    for (const auto& e : source.estimates) {
      const double z = (e.y - sc.mu_s) / e.se;
      sum += z;
      sq += z * z;
      ++n;
    }
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.0).scale(1.0).epsilon(3.0 / std::sqrt(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(3.0 * std::sqrt(2.0 / n)));
}

TEST_CASE("single-replication coverage is all or nothing") {
  const SimulationResult r = run_scenario(builtin_scenario("S1"), preset("VI"), 1, 5, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK((r.rows[0].coverage_pct == 0.0 || r.rows[0].coverage_pct == 100.0));
}

TEST_CASE("simulation results are identical for any worker count") {
  const Scenario sc = builtin_scenario("S3");
  const auto presets = preset("VI");
  const SimulationResult r1 = run_scenario(sc, presets, 40, 99, 1);
  const SimulationResult r3 = run_scenario(sc, presets, 40, 99, 3);
  CHECK(summarize(r1) == summarize(r3));
  CHECK(r1.failures == r3.failures);
}

TEST_CASE("pooling hurts coverage under strong conflict") {
  // S3: the target effect is far from the source effect, so complete
  // pooling (row I) must undercover relative to standalone (row IV).
  const Scenario sc = builtin_scenario("S3");
  std::vector<ModelPriorPreset> both = preset("I");
  both.push_back(preset("IV")[0]);
  const SimulationResult r = run_scenario(sc, both, 150, 2024, 0);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].coverage_pct < r.rows[1].coverage_pct - 20.0);
}

TEST_CASE("pooling narrows intervals when the groups agree") {
  const Scenario sc = builtin_scenario("S1");
  std::vector<ModelPriorPreset> both = preset("I");
  both.push_back(preset("IV")[0]);
  const SimulationResult r = run_scenario(sc, both, 100, 17, 0);
  CHECK(r.rows[0].mean_width < r.rows[1].mean_width);
}

TEST_CASE("calibration: credible intervals cover at the nominal rate") {
  AnalysisConfig cfg;
  cfg.model_prior = {0.5, 0.0, 0.0, 0.5};
  const CalibrationResult r = calibration_run(cfg, 5, 3, 400, 77, 0);
  CHECK(r.coverage_pct > 91.0);
  CHECK(r.coverage_pct < 99.0);
  CHECK(r.failures == 0);
}

TEST_CASE("scenario lookup and validation") {
  CHECK(builtin_scenario("S4").tau_t == 0.5);
  CHECK(builtin_scenario("S4").mu_t == 1.0);
  CHECK_THROWS_AS(builtin_scenario("S9"), InputError);
  Scenario sc = builtin_scenario("S1");
  sc.k_t = 0;
  CHECK_THROWS_AS(sc.validate(), InputError);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(4) == 4);
  CHECK(resolve_thread_count(0) >= 1);
}
