// Seeded per-trial random streams. Each trial derives its own generator from
// (seed, trial index), so scan results do not depend on thread scheduling.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lindy/indexing.hpp"

namespace lindy {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class TrialRng {
public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t s = seed ^ (0xd1b54a32d192ed03ull * (trial + 1));
    engine_.seed(splitmix64(s));
  }

  std::uint64_t next_u64() { return engine_(); }
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double log_uniform(double lo, double hi) { return std::exp(std::log(lo) + uniform01() * (std::log(hi) - std::log(lo))); }
  // uniform in [1, n]
  Index uniform_index(Index n) { return 1 + static_cast<Index>(next_u64() % n); }
  int sign() { return (next_u64() & 1u) ? 1 : -1; }

private:
  std::mt19937_64 engine_;
};

// Random coefficient vector: support indices uniform in [1, max_support],
// support size uniform in [1, max_size], magnitudes log-uniform in
// [1e-3, 1], signs uniform.
inline std::vector<std::pair<Index, double>> random_coefficients(TrialRng& rng, Index max_support, size_t max_size) {
  size_t size = 1 + static_cast<size_t>(rng.next_u64() % max_size);
  std::vector<std::pair<Index, double>> entries;
  entries.reserve(size);
  for (size_t i = 0; i < size; ++i) {
    Index j = rng.uniform_index(max_support);
    double mag = rng.log_uniform(1e-3, 1.0);
    entries.push_back({j, rng.sign() * mag});
  }
  return entries;
}

// Distinct indices forming a random set of size m inside [1, range].
inline std::vector<Index> random_subset(TrialRng& rng, Index range, size_t m) {
  std::vector<Index> out;
  out.reserve(m);
  std::vector<bool> used; // range is small in every scan that calls this
  used.assign(static_cast<size_t>(range) + 1, false);
  while (out.size() < m) {
    Index j = rng.uniform_index(range);
    if (!used[static_cast<size_t>(j)]) {
      used[static_cast<size_t>(j)] = true;
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace lindy
