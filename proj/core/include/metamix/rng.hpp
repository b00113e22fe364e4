// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <cstdint>

namespace metamix {

// Counter-based generator keyed by (seed, replication, stream). Replications
// and streams are statistically independent and fully reproducible across
// platforms and thread schedules; std::random distributions are avoided
// because their output is implementation-defined.
class SplitRng {
 public:
  SplitRng(std::uint64_t seed, std::uint64_t rep, std::uint64_t stream)
      : state_(mix(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ rep) ^
                   (stream * 0xbf58476d1ce4e5b9ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  // Standard normal via Box-Muller; the paired draw is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double next_normal(double mean, double sd) { return mean + sd * next_normal(); }

  double next_half_normal(double scale) { return scale * std::abs(next_normal()); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace metamix
