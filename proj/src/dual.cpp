#include "lindy/dual.hpp"

#include <cmath>

#include "lindy/random.hpp"

namespace lindy {

namespace {

// Walks the descendant tree of column k level by level, handing each level's
// (value, multiplicity) pairs to sink; stops when sink returns false.
template <class S, class Sink>
void walk_column_levels(const BasisContext<S>& ctx, Index k, Index node_budget, Sink&& sink) {
  const auto& t = ctx.tables();
  std::vector<std::pair<Index, S>> frontier{{k, ScalarOps<S>::from_int(1)}};
  Index level = 0;
  while (!frontier.empty()) {
    if (!sink(level, frontier)) return;
    std::vector<std::pair<Index, S>> next;
    Index nodes = 0;
    for (const auto& [i, prod] : frontier) {
      if (i + 1 > t.sigma_count()) continue;
      Index lo = t.sigma(i), hi = t.sigma(i + 1);
      nodes += hi - lo;
      if (nodes > node_budget) return; // truncate: sums only decrease
      S child = prod * ctx.weight(i);
      for (Index j = lo; j < hi; ++j) next.push_back({j, child});
    }
    frontier = std::move(next);
    ++level;
  }
}

} // namespace

ColumnQBound column_q_bound(const BasisContext<double>& ctx, Index k, double q, Index node_budget) {
  double p = ctx.p();
  if (!(q > p)) throw ConfigError("column_q_bound requires q > p");
  ColumnQBound out;
  out.bound = 1.0 / (1.0 - std::pow(2.0, (p - q) / p));
  walk_column_levels(ctx, k, node_budget, [&](Index level, const auto& frontier) {
    for (const auto& entry : frontier) out.computed += std::pow(entry.second, q);
    out.levels = level;
    // remaining levels contribute at most sup^{q-p} * 1 per level, geometric
    return true;
  });
  out.pass = out.computed <= out.bound * (1.0 + 1e-12);
  return out;
}

Rational exact_column_q_sum(const BasisContext<Rational>& ctx, Index k, unsigned q, Index max_level) {
  Rational acc(0);
  walk_column_levels(ctx, k, Index(1) << 22, [&](Index level, const auto& frontier) {
    for (const auto& entry : frontier) acc += rational_pow(entry.second, q);
    return level < max_level;
  });
  return acc;
}

NormingResult norming_check(const BasisContext<double>& ctx, const SparseVector<double>& y, size_t trials,
                            std::uint64_t seed) {
  NormingResult out;
  if (y.empty()) return {0.0, 0.0, 0.0, true};
  double p = ctx.p();
  out.sup_norm = y.sup_norm();
  Index N = y.max_support();
  double scale = std::pow(2.0, -1.0 / p);

  bool hoelder_ok = true;
  auto consider = [&](const SparseVector<double>& x_normalized) {
    double val = std::fabs(pairing(y, x_normalized));
    if (val > out.sup_norm * (1.0 + 1e-9)) hoelder_ok = false;
    out.best_witness = std::max(out.best_witness, val);
  };

  // constructive witnesses: S_N(x) = e_j scaled to the unit sphere
  if (N + 1 > ctx.tables().sigma_count())
    throw CapacityError("norming_check: tables do not cover the support of y");
  for (Index j = 1; j <= N; ++j) {
    auto x = section_witness(ctx, j, N);
    consider(x.scaled(scale)); // ||x||^p = 2, so the scaled copy is normalized
    out.section_floor = std::max(out.section_floor, scale * std::fabs(y.at(j)));
  }

  // random normalized span elements
  for (size_t trial = 0; trial < trials; ++trial) {
    TrialRng rng(seed, trial);
    auto entries = random_coefficients(rng, std::max<Index>(N, 4), 32);
    auto f = synthesize(ctx, CoeffVector<double>::from_entries({entries.begin(), entries.end()}));
    double norm = f.p_norm(p);
    if (norm == 0.0) continue;
    consider(f.scaled(1.0 / norm));
  }

  out.pass = hoelder_ok && out.best_witness >= out.section_floor * (1.0 - 1e-9);
  return out;
}

} // namespace lindy
