// The basis vectors x_k = e_k - d_k^{-1/p} * (block of e_j), their dual
// functionals, synthesis/analysis between coefficients and coordinates,
// finite-section triangularized vectors, and the block embedding of the
// sequence space into the span together with its left inverse.
#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lindy/indexing.hpp"
#include "lindy/sparse.hpp"

namespace lindy {

template <class S> class BasisContext {
public:
  BasisContext(std::shared_ptr<const IndexTables> tables, PContext pctx)
      : tables_(std::move(tables)), pctx_(pctx) {
    if constexpr (std::is_same_v<S, Rational>) {
      if (!pctx_.q) throw ConfigError("exact mode requires 1/p to be a positive integer");
    }
    Index count = tables_->sigma_count();
    weights_.reserve(static_cast<size_t>(count));
    for (Index k = 1; k < count; ++k) weights_.push_back(make_weight(tables_->delta(k)));
  }

  const IndexTables& tables() const { return *tables_; }
  std::shared_ptr<const IndexTables> tables_ptr() const { return tables_; }
  const PContext& pctx() const { return pctx_; }
  double p() const { return pctx_.p; }

  // d_k^{-1/p}
  const S& weight(Index k) const {
    if (k < 1 || k > weights_.size()) throw CapacityError("weight(k) out of range, k=" + std::to_string(k));
    return weights_[static_cast<size_t>(k - 1)];
  }

private:
  S make_weight(Index d) const {
    if constexpr (std::is_same_v<S, Rational>) {
      return Rational(BigInt(1), bigint_pow(BigInt(d), *pctx_.q));
    } else {
      return std::pow(static_cast<double>(d), -1.0 / pctx_.p);
    }
  }

  std::shared_ptr<const IndexTables> tables_;
  PContext pctx_;
  std::vector<S> weights_;
};

// x_k = e_k - d_k^{-1/p} sum_{j in [sigma(k), sigma(k+1))} e_j
template <class S> SparseVector<S> basis_vector(const BasisContext<S>& ctx, Index k) {
  if (k < 1) throw ConfigError("basis_vector requires k >= 1");
  const auto& t = ctx.tables();
  if (k + 1 > t.sigma_count()) throw CapacityError("basis_vector(k) beyond capacity, k=" + std::to_string(k));
  Index lo = t.sigma(k), hi = t.sigma(k + 1);
  std::vector<typename SparseVector<S>::Entry> entries;
  entries.reserve(static_cast<size_t>(hi - lo) + 1);
  entries.push_back({k, ScalarOps<S>::from_int(1)});
  S w = -ctx.weight(k);
  for (Index j = lo; j < hi; ++j) entries.push_back({j, w});
  return SparseVector<S>::from_entries(std::move(entries));
}

// x_j^* = sum over the rho-orbit of j of the cumulative weight products;
// support { rho^{(n)}(j) : 0 <= n <= Gamma(j) }, entries in (0, 1].
template <class S> SparseVector<S> dual_vector(const BasisContext<S>& ctx, Index j) {
  if (j < 1) throw ConfigError("dual_vector requires j >= 1");
  std::vector<typename SparseVector<S>::Entry> entries;
  S prod = ScalarOps<S>::from_int(1);
  Index v = j;
  entries.push_back({v, prod});
  while (v >= 2) {
    Index parent = ctx.tables().rho(v);
    prod = prod * ctx.weight(parent);
    entries.push_back({parent, prod});
    v = parent;
  }
  return SparseVector<S>::from_entries(std::move(entries));
}

// Coordinates of sum a_k x_k in closed form: x(1) = a_1 and
// x(j) = a_j - a_{rho(j)} d_{rho(j)}^{-1/p} for j >= 2.
template <class S> SparseVector<S> synthesize(const BasisContext<S>& ctx, const CoeffVector<S>& a) {
  const auto& t = ctx.tables();
  std::vector<typename SparseVector<S>::Entry> entries;
  for (const auto& [k, ak] : a.entries()) {
    if (k + 1 > t.sigma_count()) throw CapacityError("synthesize: coefficient beyond capacity, k=" + std::to_string(k));
    // own coordinate
    S val = ak;
    if (k >= 2) {
      Index parent = t.rho(k);
      S ap = a.at(parent);
      if (!(ap == 0)) val -= ap * ctx.weight(parent);
    }
    if (!(val == 0)) entries.push_back({k, val});
    // block coordinates not claimed by another coefficient
    Index lo = t.sigma(k), hi = t.sigma(k + 1);
    S w = -ctx.weight(k);
    for (Index j = lo; j < hi; ++j) {
      if (a.at(j) == 0) {
        S bv = ak * w;
        if (!(bv == 0)) entries.push_back({j, bv});
      }
    }
  }
  return SparseVector<S>::from_entries(std::move(entries));
}

// Basis coefficients (<x_j^*, v>)_{j <= up_to}.
template <class S> CoeffVector<S> analyze(const BasisContext<S>& ctx, const SparseVector<S>& v, Index up_to) {
  std::vector<typename CoeffVector<S>::Entry> entries;
  for (Index j = 1; j <= up_to; ++j) {
    // walk the rho-orbit instead of materializing x_j^*
    S acc = v.at(j);
    S prod = ScalarOps<S>::from_int(1);
    Index w = j;
    while (w >= 2) {
      Index parent = ctx.tables().rho(w);
      prod = prod * ctx.weight(parent);
      S coord = v.at(parent);
      if (!(coord == 0)) acc += prod * coord;
      w = parent;
    }
    if (!(acc == 0)) entries.push_back({j, acc});
  }
  return CoeffVector<S>::from_entries(std::move(entries));
}

// Witness for the finite-section statement: x in span{x_k : k <= N} with
// S_N(x) = e_j and power sum exactly 2. Built by absorbing the coordinates
// j+1..N one at a time.
template <class S> SparseVector<S> section_witness(const BasisContext<S>& ctx, Index j, Index N) {
  if (j < 1 || j > N) throw ConfigError("section_witness requires 1 <= j <= N");
  SparseVector<S> x = basis_vector(ctx, j);
  for (Index i = j + 1; i <= N; ++i) {
    S c = x.at(i);
    if (!(c == 0)) x = x.minus(basis_vector(ctx, i).scaled(c));
  }
  return x;
}

// Triangularized section vectors x_{k,n} = e_k + r_{k,n} with
// supp(r_{k,n}) in [n+1, sigma(n+1)) and power sum of r equal to 1.
template <class S>
std::vector<SparseVector<S>> orthogonalized_section(const BasisContext<S>& ctx, Index n) {
  if (n < 1) throw ConfigError("orthogonalized_section requires n >= 1");
  std::vector<SparseVector<S>> xs;
  xs.push_back(basis_vector(ctx, 1));
  for (Index i = 2; i <= n; ++i) {
    SparseVector<S> xi = basis_vector(ctx, i);
    for (auto& xk : xs) {
      S c = xk.at(i);
      if (!(c == 0)) xk = xk.minus(xi.scaled(c));
    }
    xs.push_back(std::move(xi));
  }
  return xs;
}

// Banach-Mazur distance bound for the section map, valid for every n.
inline double section_distance_bound(double p) { return std::pow(2.0, 1.0 / p); }

// Isometric embedding of the sequence space onto disjointly supported basis
// vectors, with the norm-2^{1/p} left inverse that reads coefficients back.
// The embedding uses the consecutive vectors x_k for k in one level interval
// J_nu: their supports are pairwise disjoint because distinct sigma blocks
// never meet and no index of J_nu lies in a block rooted at the same level.
template <class S> class LevelEmbedding {
public:
  LevelEmbedding(const BasisContext<S>& ctx, Index max_coeff_index) : ctx_(&ctx) {
    if (max_coeff_index < 1) max_coeff_index = 1;
    const auto& t = ctx.tables();
    Index nu = 1;
    while (true) {
      if (nu + 1 > t.max_level()) throw CapacityError("no cached level is wide enough for the embedding");
      Index width = t.lambda_at(nu + 1) - t.lambda_at(nu);
      if (width >= max_coeff_index) break;
      ++nu;
    }
    level_ = nu;
    base_ = t.lambda_at(nu);
    size_ = max_coeff_index;
    if (base_ + size_ > t.sigma_count()) throw CapacityError("embedding blocks beyond capacity");
    if constexpr (std::is_same_v<S, Rational>) {
      scale_in_ = Rational(BigInt(1), bigint_pow(BigInt(2), *ctx.pctx().q));
      scale_out_ = Rational(bigint_pow(BigInt(2), *ctx.pctx().q), BigInt(1));
    } else {
      scale_in_ = std::pow(2.0, -1.0 / ctx.pctx().p);
      scale_out_ = std::pow(2.0, 1.0 / ctx.pctx().p);
    }
  }

  Index level() const { return level_; }
  Index block_index(Index k) const { return base_ + k - 1; } // n_k
  Index size() const { return size_; }

  // J(x) = 2^{-1/p} sum_k x(k) x_{n_k}; an isometry on supports <= size().
  SparseVector<S> embed(const SparseVector<S>& x) const {
    SparseVector<S> acc;
    for (const auto& [k, v] : x.entries()) {
      if (k > size_) throw CapacityError("embed: coordinate beyond configured size");
      acc = acc.plus(basis_vector(*ctx_, block_index(k)).scaled(v * scale_in_));
    }
    return acc;
  }

  // P(y)(k) = 2^{1/p} <x_{n_k}^*, restriction of y to supp(x_{n_k})>.
  SparseVector<S> project(const SparseVector<S>& y) const {
    std::vector<typename SparseVector<S>::Entry> entries;
    const auto& t = ctx_->tables();
    for (Index k = 1; k <= size_; ++k) {
      Index n = block_index(k);
      IndexInterval block{t.sigma(n), t.sigma(n + 1)};
      auto restricted = y.filtered([&](Index j) { return j == n || block.contains(j); });
      S c = pairing(dual_vector(*ctx_, n), restricted) * scale_out_;
      if (!(c == 0)) entries.push_back({k, c});
    }
    return SparseVector<S>::from_entries(std::move(entries));
  }

private:
  const BasisContext<S>* ctx_;
  Index level_ = 1;
  Index base_ = 2;
  Index size_ = 1;
  S scale_in_{};
  S scale_out_{};
};

// Convenience wrapper: embeds x and immediately recovers it.
template <class S>
std::pair<SparseVector<S>, SparseVector<S>> embed_and_project(const BasisContext<S>& ctx, const SparseVector<S>& x) {
  if (x.empty()) return {SparseVector<S>{}, SparseVector<S>{}};
  LevelEmbedding<S> emb(ctx, x.max_support());
  SparseVector<S> image = emb.embed(x);
  return {image, emb.project(image)};
}

} // namespace lindy
