// Thresholding greedy algorithm in basis coordinates, the restricted
// truncation operator, coordinate projections, and the Lebesgue bound
// arithmetic. Randomized worst-case scans live in greedy_scan.cpp.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "lindy/basis.hpp"

namespace lindy {

template <class S> struct GreedyOutcome {
  std::vector<Index> greedy_set;  // sorted
  CoeffVector<S> projection;
  CoeffVector<S> residual;
  double input_pow = 0.0;      // ||f||^p
  double projection_pow = 0.0; // ||G_m f||^p
  double residual_pow = 0.0;   // ||f - G_m f||^p
};

// Magnitude-descending order with lowest-index tie break; exact comparisons
// in rational mode keep the greedy set deterministic.
template <class S> std::vector<Index> greedy_order(const CoeffVector<S>& a) {
  std::vector<std::pair<S, Index>> mags;
  mags.reserve(a.support_size());
  for (const auto& [k, v] : a.entries()) mags.push_back({ScalarOps<S>::abs(v), k});
  std::sort(mags.begin(), mags.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return y.first < x.first;
    return x.second < y.second;
  });
  std::vector<Index> order;
  order.reserve(mags.size());
  for (const auto& m : mags) order.push_back(m.second);
  return order;
}

template <class S>
GreedyOutcome<S> greedy_projection(const BasisContext<S>& ctx, const CoeffVector<S>& a, size_t m) {
  auto order = greedy_order(a);
  if (m > order.size()) m = order.size();
  std::vector<Index> set(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(set.begin(), set.end());
  GreedyOutcome<S> out;
  out.greedy_set = set;
  out.projection = a.restricted(std::span<const Index>(set));
  out.residual = a.minus(out.projection);
  double p = ctx.p();
  out.input_pow = synthesize(ctx, a).power_sum(p);
  out.projection_pow = synthesize(ctx, out.projection).power_sum(p);
  out.residual_pow = synthesize(ctx, out.residual).power_sum(p);
  return out;
}

// U_m(f): the m-th greedy set with every coefficient flattened to the minimal
// greedy magnitude, signs preserved.
template <class S>
CoeffVector<S> restricted_truncation(const BasisContext<S>& ctx, const CoeffVector<S>& a, size_t m) {
  (void)ctx;
  if (a.empty()) throw ConfigError("restricted_truncation: empty input");
  auto order = greedy_order(a);
  if (m < 1 || m > order.size()) throw ConfigError("restricted_truncation requires 1 <= m <= |supp|");
  S level = ScalarOps<S>::abs(a.at(order[m - 1]));
  std::vector<typename CoeffVector<S>::Entry> entries;
  for (size_t i = 0; i < m; ++i) {
    Index k = order[i];
    int sgn = ScalarOps<S>::sign(a.at(k));
    entries.push_back({k, sgn >= 0 ? level : S(-level)});
  }
  return CoeffVector<S>::from_entries(std::move(entries));
}

template <class S>
CoeffVector<S> coordinate_projection(const CoeffVector<S>& a, std::span<const Index> sorted_set) {
  return a.restricted(sorted_set);
}

// Quasi-greedy constants of the construction, from the projection theorem.
inline double qg_residual_bound(double p) { return std::pow(2.0, 1.0 / p); }
inline double qg_projection_bound(double p) {
  double r = std::pow(2.0, 1.0 / p);
  return std::min(std::pow(3.0, 1.0 / p), r * r / (r - 1.0));
}

// Democracy bounds for signed indicator sums over sets of size m. The upper
// constant is 2^{1/p} = (sum of m power sums of 2)^{1/p} / m^{1/p}; it is
// attained up to signs, e.g. x_1 - x_2 at p = 1/2 has norm 3.618^2 > 2 * 2^2.
inline double democracy_lower(double p, double m) { return (1.0 - std::pow(2.0, -1.0 / p)) * std::pow(m, 1.0 / p); }
inline double democracy_upper(double p, double m) { return std::pow(2.0 * m, 1.0 / p); }

// Interval arithmetic for the Lebesgue constant from certified complement
// projection bounds: k_m^c <= L_m <= (1 + D_s^p/(2^p-1)^2)^{1/p} k_m^c.
struct LebesgueInterval {
  double lower = 0.0;
  double upper = 0.0;
};
inline LebesgueInterval lebesgue_bounds(double p, double kmc_lower, double kmc_upper, double delta_s) {
  if (!(kmc_lower <= kmc_upper)) throw ConfigError("lebesgue_bounds: lower exceeds upper");
  if (!(delta_s >= 1.0)) throw ConfigError("lebesgue_bounds: delta_s must be >= 1");
  double twop = std::pow(2.0, p) - 1.0;
  double factor = std::pow(1.0 + std::pow(delta_s, p) / (twop * twop), 1.0 / p);
  return {kmc_lower, factor * kmc_upper};
}

// --- randomized scans (float mode), implemented in greedy_scan.cpp ---

struct ScanConfig {
  size_t trials = 10000;
  Index max_support = 2048;
  std::uint64_t seed = 7;
  size_t max_support_size = 256;
};

struct QgScanResult {
  double max_residual_ratio = 0.0;   // max_m ||f - G_m f|| / ||f||
  double max_projection_ratio = 0.0; // max_m ||G_m f|| / ||f||
  double max_truncation_ratio = 0.0; // max_m ||U_m f|| / ||f||
  std::uint64_t residual_witness_trial = 0;
  std::uint64_t projection_witness_trial = 0;
  std::string witness;
};

QgScanResult quasi_greedy_scan(const BasisContext<double>& ctx, const ScanConfig& cfg);

struct DemocracySample {
  Index m = 0;
  double min_norm = 0.0;
  double max_norm = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool pass = false;
};

std::vector<DemocracySample> democracy_scan(const BasisContext<double>& ctx, std::span<const Index> m_values,
                                            size_t trials_per_m, std::uint64_t seed);

// Nested sign-indicator comparison: ||1_{g,B}|| <= C ||1_{g,A}|| for sampled
// B inside A, with C the measured truncation-operator bound.
struct SuccResult {
  double worst_ratio = 0.0; // max over samples of ||1_B|| / ||1_A||
  double bound = 0.0;       // measured sup ||U_m||
  bool pass = false;
};
SuccResult succ_scan(const BasisContext<double>& ctx, const ScanConfig& cfg);

} // namespace lindy
