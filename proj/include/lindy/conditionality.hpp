// Certified upper bounds and constructive lower bounds for the conditionality
// constants of the basis, plus the log^{1/p} envelope measurement.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lindy/basis.hpp"

namespace lindy {

struct BoundReport {
  Index m = 0;
  double certified_upper = 0.0;
  double witnessed_lower = 0.0;
  double reference = 0.0; // (1 + Gamma(m))^{1/p}
  std::string witness;
};

// max over columns k <= k_max of (sum of the m largest |x_j^*(k)|^p)^{1/p};
// equals the operator norm of the best coordinate restriction per column.
double t_norm_top(const BasisContext<double>& ctx, Index m, Index k_max);

// min(2^{1/p} t_norm_top, 2^{1/p} (1 + Gamma(m))^{1/p}); the second factor
// requires nondecreasing delta, so for non-monotone delta only the column
// scan is returned.
double km_upper(const BasisContext<double>& ctx, Index m, Index k_max);

// The two-sequence recursion u_{k+1} = u_k - u_k(k+1) x_{k+1},
// v_{k+1} = v_k - sign(v_k(k+1)) u_k(k+1) x_{k+1} witnessing the lower bound
// 2^{-2/p} (1 + Gamma(m))^{1/p}. Advancing is sequential in k; snapshots can
// be taken at any m.
template <class S> class UvRecursion {
public:
  explicit UvRecursion(const BasisContext<S>& ctx)
      : ctx_(&ctx), u_(basis_vector(ctx, Index(1))), v_(u_), m_(1) {
    if constexpr (std::is_same_v<S, Rational>) {
      v_pow_lower_ = 2; // ||v_1||^p = ||x_1||^p
    }
  }

  Index current_m() const { return m_; }
  const SparseVector<S>& u() const { return u_; }
  const SparseVector<S>& v() const { return v_; }

  // One step k -> k+1; CapacityError once sigma(k+2) leaves the tables.
  void advance() {
    Index k = m_;
    S c = u_.at(k + 1); // equals -x_{k+1}^*(1), always <= 0
    SparseVector<S> xk1 = basis_vector(*ctx_, k + 1);
    u_ = u_.minus(xk1.scaled(c));
    int sv = ScalarOps<S>::sign(v_.at(k + 1));
    S step = sv < 0 ? S(-c) : c;
    v_ = v_.minus(xk1.scaled(step));
    if constexpr (std::is_same_v<S, Rational>) {
      auto root = exact_abs_root(c, *ctx_->pctx().q);
      if (!root) throw CheckFailure("uv step weight is not a perfect power at k=" + std::to_string(k));
      v_pow_lower_ += *root;
    }
    ++m_;
  }

  void advance_to(Index m) {
    while (m_ < m) advance();
  }

  double u_pow() const { return u_.power_sum(ctx_->p()); }
  double v_pow() const { return v_.power_sum(ctx_->p()); }

  // 2^{-1/p} ||v_m|| / ||u_m||
  double lower_estimate() const {
    double p = ctx_->p();
    return std::pow(2.0, -1.0 / p) * std::pow(v_pow() / u_pow(), 1.0 / p);
  }

  // Exact rational lower bound for ||v_m||^p: 1 + sum_{k<=m} x_k^*(1)^p,
  // accumulated from the per-step norm increments.
  const Rational& v_pow_lower() const
    requires std::is_same_v<S, Rational>
  {
    return v_pow_lower_;
  }

private:
  const BasisContext<S>* ctx_;
  SparseVector<S> u_;
  SparseVector<S> v_;
  Index m_;
  Rational v_pow_lower_;
};

struct UvWitness {
  Index m = 0;
  double u_pow = 0.0;
  double v_pow = 0.0;
  double lower_estimate = 0.0;
};

UvWitness uv_witness(const BasisContext<double>& ctx, Index m);

// Certified interval for the conditionality constant at one m.
BoundReport conditionality_report(const BasisContext<double>& ctx, Index m, Index k_max);

struct EnvelopePoint {
  Index m = 0;
  double lower = 0.0;
  double upper = 0.0;
  double lower_over_log = 0.0; // lower / (ln m)^{1/p}
  double upper_over_log = 0.0;
  std::optional<double> lower_over_gamma; // vs (1 + Gamma(m))^{1/p}, nondecreasing delta only
  std::optional<double> upper_over_gamma;
};

std::vector<EnvelopePoint> envelope_check(const BasisContext<double>& ctx, std::span<const Index> m_grid,
                                          Index k_max);

} // namespace lindy
