#include "lindy/conditionality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lindy/parallel.hpp"

namespace lindy {

namespace {

// Sum of the m largest |x_j^*(k)|^p over the column k. Column entries come in
// levels; within level n every entry is at most 2^{-n} in p-power, so the
// enumeration stops once the collected top-m cannot change.
double column_top_m(const BasisContext<double>& ctx, Index k, Index m) {
  const auto& t = ctx.tables();
  double p = ctx.p();
  std::vector<std::pair<double, Index>> values; // (|entry|^p, multiplicity)
  values.push_back({1.0, 1});                   // level 0: the diagonal
  std::vector<std::pair<Index, double>> frontier{{k, 1.0}};
  Index collected = 1;
  while (!frontier.empty()) {
    // prune: entries below can no longer enter the top m
    if (collected >= m) {
      double level_max = 0.0;
      for (const auto& f : frontier) level_max = std::max(level_max, f.second);
      std::sort(values.begin(), values.end(), std::greater<>());
      double mth = 0.0;
      Index seen = 0;
      for (const auto& [vp, count] : values) {
        seen += count;
        if (seen >= m) {
          mth = vp;
          break;
        }
      }
      if (level_max / 2.0 <= mth) break;
    }
    std::vector<std::pair<Index, double>> next;
    for (const auto& [i, pp] : frontier) {
      if (i + 1 > t.sigma_count()) continue; // column truncated at capacity
      Index lo = t.sigma(i), hi = t.sigma(i + 1);
      double child_pp = pp * ppow(ctx.weight(i), p);
      values.push_back({child_pp, hi - lo});
      collected += hi - lo;
      for (Index j = lo; j < hi; ++j) next.push_back({j, child_pp});
    }
    frontier = std::move(next);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  double acc = 0.0;
  Index taken = 0;
  for (const auto& [vp, count] : values) {
    Index take = std::min<Index>(count, m - taken);
    acc += vp * static_cast<double>(take);
    taken += take;
    if (taken == m) break;
  }
  return acc;
}

} // namespace

double t_norm_top(const BasisContext<double>& ctx, Index m, Index k_max) {
  if (m < 1) throw ConfigError("t_norm_top requires m >= 1");
  k_max = std::min<Index>(k_max, ctx.tables().sigma_count() - 1);
  std::vector<double> per_column(static_cast<size_t>(k_max));
  parallel_for(static_cast<size_t>(k_max), [&](size_t i) {
    per_column[i] = column_top_m(ctx, static_cast<Index>(i + 1), m);
  });
  double best = 0.0;
  for (double c : per_column) best = std::max(best, c);
  return std::pow(best, 1.0 / ctx.p());
}

double km_upper(const BasisContext<double>& ctx, Index m, Index k_max) {
  double p = ctx.p();
  double scale = std::pow(2.0, 1.0 / p);
  double column_bound = scale * t_norm_top(ctx, m, k_max);
  if (!ctx.tables().nondecreasing()) return column_bound;
  double gamma_bound = scale * std::pow(1.0 + static_cast<double>(ctx.tables().gamma(m)), 1.0 / p);
  return std::min(column_bound, gamma_bound);
}

UvWitness uv_witness(const BasisContext<double>& ctx, Index m) {
  if (m < 1) throw ConfigError("uv_witness requires m >= 1");
  UvRecursion<double> rec(ctx);
  rec.advance_to(m);
  return {m, rec.u_pow(), rec.v_pow(), rec.lower_estimate()};
}

BoundReport conditionality_report(const BasisContext<double>& ctx, Index m, Index k_max) {
  BoundReport report;
  report.m = m;
  auto uv = uv_witness(ctx, m);
  report.witnessed_lower = uv.lower_estimate;
  report.certified_upper = km_upper(ctx, m, k_max);
  report.reference = std::pow(1.0 + static_cast<double>(ctx.tables().gamma(m)), 1.0 / ctx.p());
  std::ostringstream os;
  os << "u/v recursion to m=" << m << ", ||u||^p=" << uv.u_pow << ", ||v||^p=" << uv.v_pow;
  report.witness = os.str();
  return report;
}

std::vector<EnvelopePoint> envelope_check(const BasisContext<double>& ctx, std::span<const Index> m_grid,
                                          Index k_max) {
  double p = ctx.p();
  bool monotone = ctx.tables().nondecreasing();
  std::vector<EnvelopePoint> points;
  UvRecursion<double> rec(ctx);
  for (Index m : m_grid) {
    if (m < 2) throw ConfigError("envelope_check grid must start at m >= 2");
    rec.advance_to(m);
    EnvelopePoint pt;
    pt.m = m;
    pt.lower = rec.lower_estimate();
    pt.upper = km_upper(ctx, m, k_max);
    double logref = std::pow(std::log(static_cast<double>(m)), 1.0 / p);
    pt.lower_over_log = pt.lower / logref;
    pt.upper_over_log = pt.upper / logref;
    if (monotone) {
      double gref = std::pow(1.0 + static_cast<double>(ctx.tables().gamma(m)), 1.0 / p);
      pt.lower_over_gamma = pt.lower / gref;
      pt.upper_over_gamma = pt.upper / gref;
    }
    points.push_back(pt);
  }
  return points;
}

} // namespace lindy
