#include "lindy/verify.hpp"

#include <cmath>
#include <sstream>

#include "lindy/conditionality.hpp"
#include "lindy/directsum.hpp"
#include "lindy/dual.hpp"
#include "lindy/greedy.hpp"
#include "lindy/quotient.hpp"
#include "lindy/random.hpp"

namespace lindy {

namespace {

constexpr double kTol = 1e-9;

struct Battery {
  std::vector<Row>& rows;
  std::ostream& log;

  void add(const std::string& quantity, Index m, double lower, double upper, double reference,
           const std::string& rule, bool pass, const std::string& witness = "") {
    rows.push_back({quantity, m, lower, upper, reference, rule, pass});
    if (!pass) log << "FAIL " << quantity << " m=" << m << " rule=" << rule << " witness: " << witness << "\n";
  }
};

void check_indexing(const IndexTables& t, Battery& b, Index range) {
  bool inverse_ok = true;
  std::string witness;
  for (Index k = 1; k <= std::min<Index>(range, t.sigma_count() - 1); ++k) {
    if (t.rho(t.sigma(k)) != k) {
      inverse_ok = false;
      witness = "rho(sigma(k)) != k at k=" + std::to_string(k);
      break;
    }
  }
  for (Index j = 2; j <= std::min<Index>(range, t.max_index()) && inverse_ok; ++j) {
    Index r = t.rho(j);
    if (!(t.sigma(r) <= j && j < t.sigma(r + 1))) {
      inverse_ok = false;
      witness = "sigma bracket fails at j=" + std::to_string(j);
    }
  }
  b.add("indexing-left-inverse", range, inverse_ok ? 1 : 0, 1, 1, "rho-sigma-identities", inverse_ok, witness);

  // consecutive level intervals tile the positive integers
  bool partition_ok = t.lambda_at(0) == 1;
  for (Index n = 0; n + 1 < t.max_level() && partition_ok; ++n)
    partition_ok = t.block_interval(1, n).hi == t.block_interval(1, n + 1).lo;
  b.add("indexing-level-partition", t.max_level(), partition_ok ? 1 : 0, 1, 1, "level-intervals-tile", partition_ok);

  bool disjoint_ok = true;
  for (Index k = 1; k <= std::min<Index>(range, 32) && disjoint_ok; ++k) {
    IndexInterval prev{0, 0};
    for (Index n = 0; n < 6; ++n) {
      IndexInterval cur;
      try {
        cur = t.block_interval(k, n);
      } catch (const CapacityError&) {
        break;
      }
      if (n > 0 && cur.lo < prev.hi) disjoint_ok = false;
      prev = cur;
    }
  }
  b.add("indexing-block-disjoint", range, disjoint_ok ? 1 : 0, 1, 1, "blocks-ascend", disjoint_ok);

  bool doubling_ok = true;
  std::string dwitness;
  for (Index m = 2; 2 * m <= t.gamma_horizon(); m = m < 1024 ? m + 1 : m * 2) {
    Index g = t.gamma(m), g2 = t.gamma(2 * m);
    if (!(g2 <= g + 1 && g + 1 <= 2 * g)) {
      doubling_ok = false;
      dwitness = "m=" + std::to_string(m);
      break;
    }
  }
  b.add("indexing-gamma-doubling", t.gamma_horizon(), doubling_ok ? 1 : 0, 1, 1, "gamma-doubling", doubling_ok,
        dwitness);

  if (t.nondecreasing()) {
    bool width_ok = true;
    for (Index n = 0; n < 4 && width_ok; ++n) {
      for (Index k = 1; k + 1 <= std::min<Index>(range, 32); ++k) {
        IndexInterval a, c;
        try {
          a = t.block_interval(k, n);
          c = t.block_interval(k + 1, n);
        } catch (const CapacityError&) {
          break;
        }
        if (a.size() > c.size()) {
          width_ok = false;
          break;
        }
      }
    }
    b.add("indexing-block-widths", range, width_ok ? 1 : 0, 1, 1, "width-monotone", width_ok);
  }
}

void check_sparse(const BasisContext<double>& ctx, Battery& b, size_t trials, std::uint64_t seed) {
  double p = ctx.p();
  bool triangle_ok = true;
  bool disjoint_ok = true;
  std::string witness;
  for (size_t i = 0; i < trials && triangle_ok; ++i) {
    TrialRng rng(seed ^ 0x5eedull, i);
    auto ea = random_coefficients(rng, 64, 16);
    auto eb = random_coefficients(rng, 64, 16);
    auto u = SparseVector<double>::from_entries({ea.begin(), ea.end()});
    auto v = SparseVector<double>::from_entries({eb.begin(), eb.end()});
    double lhs = u.plus(v).power_sum(p);
    double rhs = u.power_sum(p) + v.power_sum(p);
    if (lhs > rhs * (1.0 + 1e-12)) {
      triangle_ok = false;
      witness = "p-triangle trial " + std::to_string(i);
    }
    auto shifted = v.filtered([](Index) { return true; });
    std::vector<SparseVector<double>::Entry> moved;
    for (const auto& [j, val] : shifted.entries()) moved.push_back({j + 100, val});
    auto w = SparseVector<double>::from_entries(std::move(moved));
    double both = u.plus(w).power_sum(p);
    if (std::fabs(both - (u.power_sum(p) + w.power_sum(p))) > 1e-12 * (1.0 + both)) disjoint_ok = false;
  }
  b.add("sparse-p-triangle", trials, triangle_ok ? 1 : 0, 1, 1, "p-triangle", triangle_ok, witness);
  b.add("sparse-disjoint-additivity", trials, disjoint_ok ? 1 : 0, 1, 1, "disjoint-power-sums", disjoint_ok);
}

template <class S>
void check_basis(const BasisContext<S>& ctx, Battery& b, Index range, const char* mode) {
  const auto& t = ctx.tables();
  range = std::min<Index>(range, t.sigma_count() - 1);
  bool bio_ok = true;
  std::string witness;
  std::vector<SparseVector<S>> duals;
  duals.reserve(static_cast<size_t>(range));
  for (Index j = 1; j <= range; ++j) duals.push_back(dual_vector(ctx, j));
  for (Index k = 1; k <= range && bio_ok; ++k) {
    auto xk = basis_vector(ctx, k);
    for (Index j = 1; j <= range; ++j) {
      S got = pairing(duals[static_cast<size_t>(j - 1)], xk);
      S want = ScalarOps<S>::from_int(j == k ? 1 : 0);
      bool ok;
      if constexpr (std::is_same_v<S, Rational>) {
        ok = got == want;
      } else {
        ok = std::fabs(got - want) <= 1e-12;
      }
      if (!ok) {
        bio_ok = false;
        witness = "pairing(x*_" + std::to_string(j) + ", x_" + std::to_string(k) + ")";
        break;
      }
    }
  }
  b.add(std::string("basis-biorthogonality-") + mode, range, bio_ok ? 1 : 0, 1, 1, "dual-pairing-identity",
        bio_ok, witness);

  bool norm_ok = true;
  for (Index k = 1; k <= range && norm_ok; ++k) {
    if constexpr (std::is_same_v<S, Rational>) {
      auto pow = exact_power_sum(basis_vector(ctx, k), *ctx.pctx().q);
      norm_ok = pow && *pow == 2 && duals[static_cast<size_t>(k - 1)].sup_norm() == 1;
    } else {
      norm_ok = std::fabs(basis_vector(ctx, k).power_sum(ctx.p()) - 2.0) <= 1e-12 &&
                std::fabs(duals[static_cast<size_t>(k - 1)].sup_norm() - 1.0) <= 1e-12;
    }
  }
  b.add(std::string("basis-norm-facts-") + mode, range, norm_ok ? 1 : 0, 1, 1, "power-sum-2-and-sup-1", norm_ok);

  // level sums of each column are exactly 1, entries decay like 2^{-n} in
  // p-power; orbit weights multiply one parent step at a time
  bool column_ok = true;
  std::string cwitness;
  for (Index k = 1; k <= std::min<Index>(range, 16) && column_ok; ++k) {
    for (Index n = 0; n <= 4; ++n) {
      IndexInterval block;
      try {
        block = t.block_interval(k, n);
      } catch (const CapacityError&) {
        break;
      }
      if (block.hi > range) break;
      double level_cap = std::pow(2.0, -static_cast<double>(n));
      if constexpr (std::is_same_v<S, Rational>) {
        Rational sum(0);
        for (Index j = block.lo; j < block.hi; ++j) {
          auto root = exact_abs_root(duals[static_cast<size_t>(j - 1)].at(k), *ctx.pctx().q);
          if (!root || *root > Rational(1)) {
            column_ok = false;
            break;
          }
          sum += *root;
        }
        if (column_ok && sum != 1) column_ok = false;
      } else {
        double sum = 0.0;
        for (Index j = block.lo; j < block.hi; ++j) {
          double entry = ppow(duals[static_cast<size_t>(j - 1)].at(k), ctx.p());
          if (entry > level_cap * (1.0 + 1e-12)) column_ok = false;
          sum += entry;
        }
        if (std::fabs(sum - 1.0) > 1e-12) column_ok = false;
      }
      if (!column_ok) cwitness = "k=" + std::to_string(k) + " n=" + std::to_string(n);
    }
  }
  b.add(std::string("basis-column-levels-") + mode, range, column_ok ? 1 : 0, 1, 1,
        "level-sum-one-and-decay", column_ok, cwitness);
}

void check_greedy(const BasisContext<double>& ctx, Battery& b, size_t trials, std::uint64_t seed) {
  double p = ctx.p();
  ScanConfig cfg{trials, 512, seed, 64};
  auto qg = quasi_greedy_scan(ctx, cfg);
  double rbound = qg_residual_bound(p);
  double pbound = qg_projection_bound(p);
  b.add("greedy-qg-residual", trials, qg.max_residual_ratio, rbound, rbound, "greedy-residual-bound",
        qg.max_residual_ratio <= rbound * (1.0 + kTol), qg.witness);
  b.add("greedy-qg-projection", trials, qg.max_projection_ratio, pbound, pbound, "greedy-projection-bound",
        qg.max_projection_ratio <= pbound * (1.0 + kTol), qg.witness);
  b.add("greedy-truncation-bounded", trials, qg.max_truncation_ratio, qg.max_truncation_ratio,
        qg.max_truncation_ratio, "truncation-witness", std::isfinite(qg.max_truncation_ratio));

  // deterministic ties and exact convergence
  auto a = CoeffVector<double>::from_entries({{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 0.5}});
  auto out = greedy_projection(ctx, a, 2);
  bool ties_ok = out.greedy_set == std::vector<Index>{1, 2};
  b.add("greedy-tie-determinism", 2, ties_ok ? 1 : 0, 1, 1, "lowest-index-ties", ties_ok);
  auto full = greedy_projection(ctx, a, 4);
  b.add("greedy-exact-convergence", 4, full.residual.empty() ? 1 : 0, 1, 1, "full-support-projection",
        full.residual.empty());

  auto succ = succ_scan(ctx, ScanConfig{std::max<size_t>(trials / 4, 100), 256, seed, 64});
  b.add("greedy-succ", trials, succ.worst_ratio, succ.bound, succ.bound, "nested-indicator-suppression",
        succ.pass);
}

void check_democracy(const BasisContext<double>& ctx, Battery& b, size_t trials, std::uint64_t seed) {
  std::vector<Index> ms{1, 2, 4, 8, 16, 32, 64};
  auto samples = democracy_scan(ctx, ms, std::max<size_t>(trials / 8, 50), seed);
  for (const auto& s : samples)
    b.add("democracy", s.m, s.min_norm, s.max_norm, s.upper_bound, "superdemocracy-bounds", s.pass);
}

void check_conditionality(const BasisContext<double>& ctx, Battery& b, std::span<const Index> grid, Index k_max) {
  double p = ctx.p();
  UvRecursion<double> rec(ctx);
  for (Index m : grid) {
    try {
      rec.advance_to(m);
    } catch (const CapacityError&) {
      break;
    }
    double lower = rec.lower_estimate();
    double upper = km_upper(ctx, m, k_max);
    double reference = std::pow(1.0 + static_cast<double>(ctx.tables().gamma(m)), 1.0 / p);
    bool ok = lower <= upper * (1.0 + kTol);
    bool u_ok = std::fabs(rec.u_pow() - 2.0) <= 1e-9;
    bool v_ok = rec.v_pow() > 1.0 + static_cast<double>(ctx.tables().gamma(m)) - 1e-9;
    if (ctx.tables().nondecreasing()) {
      ok = ok && lower >= std::pow(2.0, -2.0 / p) * reference * (1.0 - kTol) &&
           upper <= std::pow(2.0, 1.0 / p) * reference * (1.0 + kTol);
    }
    b.add("conditionality", m, lower, upper, reference, "uv-witness-and-column-bound", ok && u_ok && v_ok);
  }
}

void check_quotient(const BasisContext<double>& ctx, Battery& b, Index range, size_t trials, std::uint64_t seed) {
  const auto& t = ctx.tables();
  double p = ctx.p();
  range = std::min<Index>(range, t.sigma_count() - 1);
  bool kernel_ok = true;
  for (Index k = 1; k <= range && kernel_ok; ++k) {
    auto f = q_map(ctx, basis_vector(ctx, k));
    for (const auto& v : f.values)
      if (std::fabs(v) > 1e-9) kernel_ok = false;
  }
  b.add("quotient-kernel", range, kernel_ok ? 1 : 0, 1, 1, "basis-vectors-vanish", kernel_ok);

  bool refine_ok = true;
  for (Index n = 0; n + 1 <= std::min<Index>(t.max_level(), 6) && refine_ok; ++n) {
    IndexInterval level = t.block_interval(1, n);
    Rational total(0);
    Rational max_len(0);
    for (Index j = level.lo; j < level.hi; ++j) {
      auto iv = interval(t, j);
      total += iv.length();
      max_len = std::max(max_len, iv.length());
    }
    Rational cap(1, BigInt(1) << std::min<Index>(n, 62));
    if (total != 1 || max_len > cap) refine_ok = false;
  }
  b.add("quotient-partition", std::min<Index>(t.max_level(), 6), refine_ok ? 1 : 0, 1, 1,
        "level-partition-diameter", refine_ok);

  bool contraction_ok = true;
  for (size_t i = 0; i < trials && contraction_ok; ++i) {
    TrialRng rng(seed ^ 0x907ull, i);
    auto entries = random_coefficients(rng, std::min<Index>(range, 64), 16);
    auto v = SparseVector<double>::from_entries({entries.begin(), entries.end()});
    double img = step_power_sum(q_map(ctx, v), p);
    if (img > v.power_sum(p) * (1.0 + 1e-9)) contraction_ok = false;
  }
  b.add("quotient-contraction", trials, contraction_ok ? 1 : 0, 1, 1, "image-power-sum-bounded",
        contraction_ok);
}

void check_dual(const BasisContext<double>& ctx, Battery& b, Index range, std::uint64_t seed) {
  const auto& t = ctx.tables();
  range = std::min<Index>(range, t.sigma_count() - 1);

  std::vector<Index> A(static_cast<size_t>(range));
  std::vector<int> plus(static_cast<size_t>(range), 1), alt(static_cast<size_t>(range));
  for (Index j = 1; j <= range; ++j) {
    A[static_cast<size_t>(j - 1)] = j;
    alt[static_cast<size_t>(j - 1)] = (j % 2 == 0) ? 1 : -1;
  }
  double head = 0.0;
  {
    SparseVector<double> acc;
    for (Index j = 1; j <= range; ++j) acc = acc.plus(dual_vector(ctx, j));
    head = acc.at(1);
  }
  double gamma_m = static_cast<double>(t.gamma(range));
  b.add("dual-head-column", range, gamma_m, head, gamma_m, "head-column-exceeds-gamma", head > gamma_m);
  if (t.nondecreasing()) { // the sup bounds need the width-monotone levels
    double alt_norm = dual_sum_supnorm(ctx, A, alt);
    b.add("dual-alternating", range, alt_norm, 2.0, 2.0, "alternating-sum-bound", alt_norm <= 2.0 + kTol);
    double phi_upper = dual_sum_supnorm(ctx, A, plus);
    b.add("dual-phi-upper", range, phi_upper, 1.0 + gamma_m, 1.0 + gamma_m, "sign-sum-sup-bound",
          phi_upper <= 1.0 + gamma_m + kTol);
  }
  double level_sum = sparse_level_sum(ctx, std::min<Index>(t.max_level() - 1, 12));
  b.add("dual-level-sum", std::min<Index>(t.max_level() - 1, 12), level_sum, 2.0, 2.0, "level-heads-bound",
        level_sum <= 2.0 + kTol);

  TrialRng rng(seed ^ 0xd0a1ull, 1);
  std::vector<SparseVector<double>::Entry> ye;
  for (Index j = 1; j <= std::min<Index>(range, 24); ++j)
    ye.push_back({j, rng.sign() * rng.log_uniform(0.1, 1.0)});
  auto y = SparseVector<double>::from_entries(std::move(ye));
  auto norming = norming_check(ctx, y, 200, seed);
  b.add("dual-norming", y.max_support(), norming.section_floor, norming.best_witness, norming.sup_norm,
        "norming-set-floor", norming.pass);
}

void check_directsum(const BasisContext<double>& ctx, Battery& b, size_t trials, std::uint64_t seed) {
  auto layout = BlockLayout::parse("geom:2", 10);
  double p = ctx.p();
  bool sandwich_ok = true;
  for (size_t i = 0; i < trials && sandwich_ok; ++i) {
    TrialRng rng(seed ^ 0xd5ull, i);
    auto entries = random_coefficients(rng, std::min<Index>(layout.total(), 256), 32);
    auto a = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
    if (a.empty()) continue;
    double pow_plain = a.power_sum(p);
    double pow_block = block_power_sum(layout, ctx, a);
    if (!(pow_plain <= pow_block * (1.0 + kTol) && pow_block <= 2.0 * pow_plain * (1.0 + kTol)))
      sandwich_ok = false;
  }
  b.add("directsum-sandwich", trials, sandwich_ok ? 1 : 0, 1, 1, "block-norm-equivalence", sandwich_ok);

  // single block agrees with the plain greedy projection
  auto single = BlockLayout::from_sizes({64});
  TrialRng rng(seed ^ 0x51ull, 0);
  auto entries = random_coefficients(rng, 64, 16);
  auto a = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
  auto lhs = directsum_greedy(single, ctx, a, 4);
  auto rhs = greedy_projection(ctx, a, 4);
  bool agree = lhs.greedy_set == rhs.greedy_set &&
               std::fabs(lhs.residual_pow - rhs.residual_pow) <= 1e-9 * (1.0 + rhs.residual_pow);
  b.add("directsum-single-block", 4, agree ? 1 : 0, 1, 1, "single-block-reduction", agree);

  std::vector<Index> grid{4, 16, 64, 256};
  auto reports = directsum_conditionality(layout, ctx, grid, 64);
  for (const auto& r : reports) {
    bool ok = r.witnessed_lower <= r.certified_upper * (1.0 + kTol) &&
              r.witnessed_lower >= std::pow(2.0, -3.0 / p) * r.reference * (1.0 - kTol) &&
              r.certified_upper <= std::pow(2.0, 1.0 / p) * r.reference * (1.0 + kTol);
    b.add("directsum-conditionality", r.m, r.witnessed_lower, r.certified_upper, r.reference,
          "blockwise-growth-ratio", ok, r.witness);
  }
}

} // namespace

std::vector<Row> run_verify(const VerifyConfig& cfg, std::ostream& log) {
  PContext pctx = PContext::make(cfg.p);
  if (cfg.exact && !pctx.exact_capable())
    throw ConfigError("exact verification requires 1/p to be a positive integer");

  std::vector<Index> grid = cfg.m_grid;
  if (grid.empty())
    for (Index m = 2; m <= 1024; m *= 2) grid.push_back(m);

  // basis vectors up to the scan supports, the grid, and the block layout
  Index max_k = std::max<Index>({cfg.basis_range + 2, 513, grid.back() + 2, 1026});
  auto tables = make_tables_for_basis(cfg.delta, max_k);
  BasisContext<double> ctx(tables, pctx);

  std::vector<Row> rows;
  Battery b{rows, log};

  check_indexing(*tables, b, cfg.basis_range);
  check_sparse(ctx, b, cfg.trials / 4 + 1, cfg.seed);
  check_basis(ctx, b, cfg.basis_range, "float");
  if (cfg.exact) {
    BasisContext<Rational> rctx(tables, pctx);
    check_basis(rctx, b, cfg.basis_range, "exact");
  }
  check_greedy(ctx, b, cfg.trials, cfg.seed);
  check_democracy(ctx, b, cfg.trials, cfg.seed);
  check_conditionality(ctx, b, grid, std::min<Index>(cfg.basis_range, 64));
  check_quotient(ctx, b, std::min<Index>(cfg.basis_range, 64), cfg.trials / 4 + 1, cfg.seed);
  check_dual(ctx, b, cfg.basis_range, cfg.seed);
  check_directsum(ctx, b, cfg.trials / 4 + 1, cfg.seed);

  sort_rows(rows);
  return rows;
}

} // namespace lindy
