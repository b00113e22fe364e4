// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <span>

namespace metamix {

inline constexpr double kLogTwoPi = 1.8378770664093454836;
inline constexpr double kSqrtTwo = 1.4142135623730950488;
inline constexpr double kSqrtTwoPi = 2.5066282746310005024;

inline double normal_pdf(double x, double mean = 0.0, double sd = 1.0) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * kSqrtTwoPi);
}

inline double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * (kLogTwoPi + z * z) - std::log(sd);
}

inline double normal_cdf(double x, double mean = 0.0, double sd = 1.0) {
  return 0.5 * std::erfc(-(x - mean) / (sd * kSqrtTwo));
}

// Standard-normal quantile: Acklam's rational approximation plus one
// Halley refinement step against erfc, accurate to ~1e-15.
double normal_quantile(double p);

// log(sum(exp(x))) without overflow; -inf for empty input.
double log_sum_exp(std::span<const double> x);

}  // namespace metamix
