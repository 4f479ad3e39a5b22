// Sup-norm quantities for signed sums of the dual functionals, the column
// q-sums, and the norming-set check against sampled unit-ball elements.
#pragma once

#include <vector>

#include "lindy/basis.hpp"

namespace lindy {

template <class S> struct DualCombination {
  std::vector<Index> indices;
  std::vector<int> signs;
  SparseVector<S> vec; // sum of sign_j x_j^*
  S sup_norm{};
};

template <class S>
DualCombination<S> dual_combination(const BasisContext<S>& ctx, std::span<const Index> A, std::span<const int> signs) {
  if (A.size() != signs.size()) throw ConfigError("dual_combination: |A| != |signs|");
  DualCombination<S> out;
  out.indices.assign(A.begin(), A.end());
  out.signs.assign(signs.begin(), signs.end());
  SparseVector<S> acc;
  for (size_t i = 0; i < A.size(); ++i) {
    auto dv = dual_vector(ctx, A[i]);
    acc = acc.plus(signs[i] < 0 ? dv.scaled(ScalarOps<S>::from_int(-1)) : dv);
  }
  out.vec = std::move(acc);
  out.sup_norm = out.vec.sup_norm();
  return out;
}

// ||sum_{j in A} eps_j x_j^*||_inf; the scan range [1, max A] is exhaustive
// because supp(x_j^*) lies in [1, j].
template <class S> S dual_sum_supnorm(const BasisContext<S>& ctx, std::span<const Index> A, std::span<const int> signs) {
  return dual_combination(ctx, A, signs).sup_norm;
}

// ||sum_{n <= n_max} x*_{Lambda(n)}||_inf; at most one orbit point per level
// meets each column, so the value stays below the geometric bound 2.
template <class S> S sparse_level_sum(const BasisContext<S>& ctx, Index n_max) {
  SparseVector<S> acc;
  for (Index n = 0; n <= n_max; ++n) acc = acc.plus(dual_vector(ctx, ctx.tables().lambda_at(n)));
  return acc.sup_norm();
}

struct ColumnQBound {
  double computed = 0.0; // truncated sum_j |x_j^*(k)|^q
  double bound = 0.0;    // 1 / (1 - 2^{(p-q)/p})
  Index levels = 0;
  bool pass = false;
};

// Truncated column q-sum against the geometric-series bound; truncation only
// decreases the sum. node_budget caps the enumerated entries per level.
ColumnQBound column_q_bound(const BasisContext<double>& ctx, Index k, double q, Index node_budget = Index(1) << 20);

// Exact column q-sum for integer exponents in rational mode.
Rational exact_column_q_sum(const BasisContext<Rational>& ctx, Index k, unsigned q, Index max_level);

struct NormingResult {
  double best_witness = 0.0;  // max |<y, x>| over sampled normalized x
  double sup_norm = 0.0;      // ||y||_inf
  double section_floor = 0.0; // 2^{-1/p} ||S_N y||_inf from the constructive witnesses
  bool pass = false;
};

// Samples normalized span elements (random coefficients plus the section
// witnesses) and reports how well they norm y against ||y||_inf.
NormingResult norming_check(const BasisContext<double>& ctx, const SparseVector<double>& y, size_t trials,
                            std::uint64_t seed);

} // namespace lindy
