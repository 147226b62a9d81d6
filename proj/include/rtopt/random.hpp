#pragma once

#include "rtopt/types.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace rtopt {

/// splitmix64 step; used to derive independent streams from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
  return splitmix64(s);
}

/// Deterministic xorshift-based generator with a Box-Muller normal sampler.
/// Fixed arithmetic end to end so that identical seeds give identical
/// streams on every platform and library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bULL) {
    // warm up
    for (int i = 0; i < 4; ++i) next();
  }

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform in (0, 1).
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Vec normal_vec(int n, double stddev = 1.0) {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = stddev * normal();
    return out;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Centered moving average along the time axis with a truncated window at
/// the boundaries.
inline std::vector<Vec> moving_average(const std::vector<Vec>& seq, int width) {
  const int T = static_cast<int>(seq.size());
  if (T == 0) return {};
  const int half = width / 2;
  std::vector<Vec> out(T);
  for (int t = 0; t < T; ++t) {
    Vec acc = Vec::Zero(seq[t].size());
    int count = 0;
    for (int k = std::max(0, t - half); k <= std::min(T - 1, t + half); ++k) {
      acc += seq[k];
      ++count;
    }
    out[t] = acc / count;
  }
  return out;
}

}  // namespace rtopt
