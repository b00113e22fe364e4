// Apache License, Version 2.0, refer to LICENSE.txt
#include <cmath>

#include <doctest.h>

#include "metamix/datasets.hpp"
#include "metamix/effect_size.hpp"
#include "metamix/rng.hpp"

using namespace metamix;

TEST_CASE("log odds ratio of a clean table") {
  // 12/14 vs 6/14: OR = (12*8)/(2*6) = 8.
  const TwoByTwoTable t{"A", "g", 12, 14, 6, 14};
  const EffectEstimate e = log_odds_ratio(t);
  CHECK(e.y == doctest::Approx(std::log(8.0)).epsilon(1e-12));
  CHECK(e.se == doctest::Approx(std::sqrt(1.0 / 12 + 1.0 / 2 + 1.0 / 6 + 1.0 / 8))
                    .epsilon(1e-12));
  const Interval ci = wald_ci(e, 0.95);
  CHECK(ci.lower == doctest::Approx(0.246).epsilon(5e-3));
  CHECK(ci.upper == doctest::Approx(3.913).epsilon(5e-3));
}

TEST_CASE("equal arms give zero log odds ratio") {
  const TwoByTwoTable t{"A", "g", 30, 60, 15, 30};
  CHECK(log_odds_ratio(t).y == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("strong negative effect") {
  // 14/61 vs 15/20: OR = (14*5)/(47*15) = 70/705.
  const TwoByTwoTable t{"B", "g", 14, 61, 15, 20};
  const EffectEstimate e = log_odds_ratio(t);
  CHECK(std::exp(e.y) == doctest::Approx(70.0 / 705.0).epsilon(1e-12));
}

TEST_CASE("zero cells trigger the continuity correction on every cell") {
  const TwoByTwoTable t{"C", "g", 0, 10, 5, 10};
  const EffectEstimate e = log_odds_ratio(t);
  const double expect = std::log((0.5 * 5.5) / (10.5 * 5.5));
  CHECK(e.y == doctest::Approx(expect).epsilon(1e-12));
  const double se = std::sqrt(1 / 0.5 + 1 / 10.5 + 1 / 5.5 + 1 / 5.5);
  CHECK(e.se == doctest::Approx(se).epsilon(1e-12));
}

TEST_CASE("wald interval matches the normal quantile") {
  const EffectEstimate unit{"s", "g", 0.0, 1.0};
  const Interval ci = wald_ci(unit, 0.95);
  CHECK(ci.lower == doctest::Approx(-1.959964).epsilon(1e-5));
  CHECK(ci.upper == doctest::Approx(1.959964).epsilon(1e-5));

  const EffectEstimate e{"s", "g", 0.454, 0.679};
  const Interval ci2 = wald_ci(e, 0.95);
  CHECK(ci2.lower == doctest::Approx(0.454 - 1.9599640 * 0.679).epsilon(1e-6));
  CHECK(ci2.upper == doctest::Approx(0.454 + 1.9599640 * 0.679).epsilon(1e-6));
}

TEST_CASE("arm swap flips the sign of the log odds ratio") {
  SplitRng rng(7, 0, 0);
  for (int i = 0; i < 50; ++i) {
    const long a = 1 + static_cast<long>(rng.next_u64() % 40);
    const long n1 = a + 1 + static_cast<long>(rng.next_u64() % 40);
    const long c = 1 + static_cast<long>(rng.next_u64() % 40);
    const long n2 = c + 1 + static_cast<long>(rng.next_u64() % 40);
    const TwoByTwoTable t{"s", "g", a, n1, c, n2};
    const TwoByTwoTable swapped{"s", "g", c, n2, a, n1};
    const EffectEstimate e1 = log_odds_ratio(t);
    const EffectEstimate e2 = log_odds_ratio(swapped);
    CHECK(e1.y == doctest::Approx(-e2.y).scale(1.0).epsilon(1e-12));
    CHECK(e1.se == doctest::Approx(e2.se).epsilon(1e-12));
  }
}

TEST_CASE("larger studies give smaller standard errors") {
  const TwoByTwoTable small{"s", "g", 10, 20, 8, 20};
  const TwoByTwoTable big{"s", "g", 100, 200, 80, 200};
  CHECK(log_odds_ratio(big).se < log_odds_ratio(small).se);
  CHECK(log_odds_ratio(big).y ==
        doctest::Approx(log_odds_ratio(small).y).epsilon(1e-12));
}

TEST_CASE("builtin datasets have the expected shape") {
  const Dataset migraine = escalc_dataset(migraine_tables());
  CHECK(migraine.size() == 23);
  CHECK(filter_group(migraine, "adolescents").size() == 20);
  CHECK(filter_group(migraine, "children").size() == 3);

  const Dataset transplant = escalc_dataset(transplant_tables());
  CHECK(transplant.size() == 16);
  CHECK(filter_group(transplant, "adults").size() == 14);
  CHECK(filter_group(transplant, "children").size() == 2);
}

TEST_CASE("invalid tables are rejected with a row reference") {
  CHECK_THROWS_AS(escalc_dataset({}), InputError);
  std::vector<TwoByTwoTable> bad = {{"ok", "g", 1, 10, 2, 10},
                                    {"bad", "g", 11, 10, 2, 10}};
  CHECK_THROWS_WITH_AS(escalc_dataset(bad),
                       doctest::Contains("row 2"), InputError);
}

TEST_CASE("concatenate preserves order") {
  const Dataset a{{{"a", "g", 0.1, 1.0}}};
  const Dataset b{{{"b", "h", 0.2, 1.0}}};
  const Dataset ab = concatenate(a, b);
  REQUIRE(ab.size() == 2);
  CHECK(ab.estimates[0].study_label == "a");
  CHECK(ab.estimates[1].study_label == "b");
}
