// Integer combinatorics of the construction: the cumulative map sigma,
// its left inverse rho, the level sequence Lambda = sigma-iterates of 1 with
// left inverse Gamma, level intervals J_n and block intervals J_{k,n}.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lindy/errors.hpp"

namespace lindy {

using Index = std::uint64_t;

// Half-open integer interval [lo, hi).
struct IndexInterval {
  Index lo = 0;
  Index hi = 0;
  Index size() const { return hi - lo; }
  bool contains(Index j) const { return lo <= j && j < hi; }
  friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

// Rule generating the sequence delta = (d_n), integers >= 2.
class DeltaSpec {
public:
  enum class Rule { Constant, Explicit, Power, Table };

  static DeltaSpec constant(Index c);
  static DeltaSpec explicit_list(std::vector<Index> terms, std::optional<Index> tail);
  static DeltaSpec power(double exponent); // d_n = max(2, ceil(n^a))
  static DeltaSpec table(std::vector<Index> terms);

  // Grammar: const:<c> | list:<c1,c2,...>[;tail=<c>] | pow:<a> | table:<file>
  static DeltaSpec parse(const std::string& text);

  Rule rule() const { return rule_; }
  // d_n for n >= 1; CapacityError past the end of a finite table.
  Index term(Index n) const;
  // Finite tables cannot generate terms beyond their length.
  std::optional<Index> term_limit() const;
  bool nondecreasing_hint() const { return nondecreasing_; }
  void set_nondecreasing(bool flag) { nondecreasing_ = flag; }
  std::string describe() const;

private:
  DeltaSpec() = default;
  Rule rule_ = Rule::Constant;
  Index constant_ = 2;
  std::vector<Index> terms_;
  std::optional<Index> tail_;
  double exponent_ = 0.0;
  bool nondecreasing_ = false;
};

// Immutable sigma/Lambda caches over a delta rule. All queries are pure table
// lookups; instances can be shared freely between threads.
class IndexTables {
public:
  // Builds caches so that every coordinate j <= max_index is covered by a
  // sigma block and Gamma is defined for m <= gamma_horizon().
  IndexTables(DeltaSpec spec, Index max_index);

  const DeltaSpec& spec() const { return spec_; }
  Index max_index() const { return max_index_; }

  // d_k; defined for k < sigma_count().
  Index delta(Index k) const;
  // sigma(k) = 2 + sum_{j<k} d_j; defined for 1 <= k <= sigma_count().
  Index sigma(Index k) const;
  Index sigma_count() const { return static_cast<Index>(sigma_.size()); }
  // Left inverse: the unique j with sigma(j) <= k < sigma(j+1); k >= 2.
  Index rho(Index k) const;
  // Lambda(n) = n-fold sigma-iterate of 1; n <= max_level().
  Index lambda_at(Index n) const;
  Index max_level() const { return static_cast<Index>(lambda_.size()) - 1; }
  // Left inverse of Lambda: Gamma(m) = n with Lambda(n) <= m < Lambda(n+1).
  Index gamma(Index m) const;
  // Largest m with Gamma(m) defined.
  Index gamma_horizon() const { return lambda_.back() - 1; }

  // sigma^{(n)}(k); CapacityError if an iterate leaves the cached range.
  Index sigma_iterate(Index k, Index n) const;
  // J_{k,n} = [sigma^{(n)}(k), sigma^{(n)}(k+1)); J_{1,n} = [Lambda(n), Lambda(n+1)).
  IndexInterval block_interval(Index k, Index n) const;
  // Sigma(A) = union of blocks [sigma(k), sigma(k+1)), k in A, as merged intervals.
  std::vector<IndexInterval> sigma_set(std::span<const Index> A) const;

  // True when d_k is nondecreasing over the cached range.
  bool nondecreasing() const { return nondecreasing_; }

private:
  DeltaSpec spec_;
  Index max_index_;
  std::vector<Index> sigma_;  // sigma_[k-1] = sigma(k)
  std::vector<Index> lambda_; // lambda_[n] = Lambda(n)
  bool nondecreasing_ = true;
};

// Tables wide enough that every basis vector x_k with k <= max_k can be
// materialized (sigma(max_k + 1) cached); finite tables may cover less.
std::shared_ptr<const IndexTables> make_tables_for_basis(const DeltaSpec& spec, Index max_k,
                                                         Index min_coordinate = 2);

} // namespace lindy
