#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlosd {

/// Deterministic random source. Wraps std::mt19937_64 but implements the
/// value transforms (uniform, normal, Poisson) by hand so that streams are
/// identical across standard library implementations. Substreams derived
/// from (seed, stream, index) allow per-frame generation in any order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent substream for e.g. one frame of one dataset.
  static Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    std::uint64_t s = mix(seed);
    s = mix(s ^ (0x9e3779b97f4a7c15ull + stream));
    s = mix(s ^ (0xbf58476d1ce4e5b9ull + index));
    return Rng(raw(s));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Two independent standard normals by the Marsaglia polar method.
  void normal_pair(double& a, double& b) {
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    a = u * f;
    b = v * f;
  }

  /// Standard normal; no state cached between calls.
  double normal() {
    double a, b;
    normal_pair(a, b);
    return a;
  }

  /// Poisson count by inversion (exact for the small rates used here).
  int poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  struct raw {
    std::uint64_t v;
    explicit raw(std::uint64_t value) : v(value) {}
  };
  explicit Rng(raw r) : engine_(r.v) {}

  // splitmix64 finalizer; spreads nearby seeds apart.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace nlosd
