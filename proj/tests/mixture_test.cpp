// Apache License, Version 2.0, refer to LICENSE.txt
#include <cmath>

#include <doctest.h>

#include "metamix/mixture.hpp"
#include "metamix/normal.hpp"
#include "metamix/rng.hpp"

using namespace metamix;

namespace {

NormalMixture standard_normal() { return NormalMixture({{1.0, 0.0, 1.0}}); }

NormalMixture random_mixture(SplitRng& rng) {
  const int k = 1 + static_cast<int>(rng.next_u64() % 5);
  std::vector<NormalComponent> comps;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = 0.05 + rng.next_unit();
    total += w;
    comps.push_back({w, rng.next_uniform(-3.0, 3.0), rng.next_uniform(0.05, 2.0)});
  }
  for (auto& c : comps) c.weight /= total;
  return NormalMixture(std::move(comps));
}

}  // namespace

TEST_CASE("single standard normal component") {
  const NormalMixture m = standard_normal();
  CHECK(m.pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(m.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.cdf(-40.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(m.cdf(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(m.mean() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(m.sd() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixture moments match the component formula") {
  const NormalMixture m({{0.25, -1.0, 0.5}, {0.75, 2.0, 1.5}});
  const double mean = 0.25 * -1.0 + 0.75 * 2.0;
  const double second = 0.25 * (0.25 + 1.0) + 0.75 * (2.25 + 4.0);
  CHECK(m.mean() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(m.sd() == doctest::Approx(std::sqrt(second - mean * mean)).epsilon(1e-12));
}

TEST_CASE("symmetric mixture has median zero") {
  const NormalMixture m({{0.5, -2.0, 0.7}, {0.5, 2.0, 0.7}});
  CHECK(m.median() == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  const Interval ci = m.shortest_interval(0.95);
  CHECK(ci.lower == doctest::Approx(-ci.upper).epsilon(1e-5));
}

TEST_CASE("quantile-cdf roundtrip on random mixtures") {
  SplitRng rng(42, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const NormalMixture m = random_mixture(rng);
    for (double p : {0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999}) {
      CHECK(std::abs(m.cdf(m.quantile(p)) - p) < 1e-8);
    }
  }
}

TEST_CASE("shortest interval is never wider than the equal-tailed one") {
  SplitRng rng(43, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const NormalMixture m = random_mixture(rng);
    const Interval shortest = m.shortest_interval(0.95);
    const Interval equal = m.equal_tailed_interval(0.95);
    CHECK(shortest.width() <= equal.width() + 1e-7);
    // The shortest interval still holds the nominal mass.
    CHECK(m.cdf(shortest.upper) - m.cdf(shortest.lower) ==
          doctest::Approx(0.95).epsilon(1e-6));
  }
}

TEST_CASE("for a single normal the two intervals coincide") {
  const NormalMixture m({{1.0, 0.3, 0.8}});
  const Interval shortest = m.shortest_interval(0.95);
  const Interval equal = m.equal_tailed_interval(0.95);
  CHECK(shortest.lower == doctest::Approx(equal.lower).epsilon(1e-6));
  CHECK(shortest.upper == doctest::Approx(equal.upper).epsilon(1e-6));
  CHECK(equal.lower == doctest::Approx(0.3 - 1.9599640 * 0.8).epsilon(1e-6));
}

TEST_CASE("skewed mixture: shortest interval is strictly narrower") {
  const NormalMixture m({{0.85, 0.0, 0.3}, {0.15, 3.0, 1.5}});
  CHECK(m.shortest_interval(0.95).width() < m.equal_tailed_interval(0.95).width());
}

TEST_CASE("pdf integrates to one") {
  const NormalMixture m({{0.4, -1.5, 0.4}, {0.6, 1.0, 1.2}});
  const double lo = m.quantile(1e-10);
  const double hi = m.quantile(1.0 - 1e-10);
  const int n = 2000;
  const double h = (hi - lo) / n;
  double sum = m.pdf(lo) + m.pdf(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * m.pdf(lo + i * h);
  CHECK(sum * h / 3.0 == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("model posterior probabilities follow Bayes' theorem") {
  const std::vector<double> logm = {-10.0, -11.0};
  const std::vector<double> priors = {0.5, 0.5};
  const auto probs = model_posterior_probs(logm, priors);
  REQUIRE(probs.size() == 2);
  const double r = std::exp(-10.0) / (std::exp(-10.0) + std::exp(-11.0));
  CHECK(probs[0] == doctest::Approx(r).epsilon(1e-12));
  CHECK(probs[0] + probs[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Consistency with the Bayes factor identity: posterior odds = BF * prior odds.
  const double bf = bayes_factor(-10.0, -11.0);
  CHECK(probs[0] / probs[1] == doctest::Approx(bf).epsilon(1e-12));
}

TEST_CASE("extreme log marginals stay finite") {
  const std::vector<double> logm = {-1000.0, -2000.0};
  const std::vector<double> priors = {0.5, 0.5};
  const auto probs = model_posterior_probs(logm, priors);
  CHECK(probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("zero prior everywhere is rejected") {
  const std::vector<double> logm = {-1.0, -2.0};
  const std::vector<double> priors = {0.0, 0.0};
  CHECK_THROWS_AS(model_posterior_probs(logm, priors), InputError);
}

TEST_CASE("model averaging bookkeeping") {
  const std::vector<WeightedPosterior> fits = {
      {"A", -10.0, NormalMixture({{1.0, 0.0, 1.0}})},
      {"B", -10.0, NormalMixture({{1.0, 2.0, 0.5}})},
  };
  const std::vector<double> priors = {0.5, 0.5};
  const ModelAverage avg = average(fits, priors);
  REQUIRE(avg.models.size() == 2);
  CHECK(avg.models[0].posterior_prob == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(avg.bayes_factor_between(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(avg.pooled.components().size() == 2);
  CHECK(avg.pooled.components()[0].weight == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(avg.pooled.mean() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("averaging a model with itself is the identity") {
  const NormalMixture base({{0.3, -0.5, 0.4}, {0.7, 0.8, 0.9}});
  const std::vector<WeightedPosterior> fits = {{"A", -5.0, base}, {"B", -5.0, base}};
  const std::vector<double> priors = {0.25, 0.75};
  const ModelAverage avg = average(fits, priors);
  for (double x : {-2.0, 0.0, 0.5, 2.0}) {
    CHECK(avg.pooled.pdf(x) == doctest::Approx(base.pdf(x)).epsilon(1e-12));
    CHECK(avg.pooled.cdf(x) == doctest::Approx(base.cdf(x)).epsilon(1e-12));
  }
}

TEST_CASE("invalid mixtures are rejected") {
  CHECK_THROWS_AS(NormalMixture(std::vector<NormalComponent>{}), InputError);
  CHECK_THROWS_AS(NormalMixture({{1.0, 0.0, 0.0}}), InputError);
  CHECK_THROWS_AS(NormalMixture({{-1.0, 0.0, 1.0}, {2.0, 0.0, 1.0}}), InputError);
  CHECK_THROWS_AS(NormalMixture({{0.4, 0.0, 1.0}}), InputError);
}
