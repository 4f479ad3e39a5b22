#include <doctest.h>

#include "lindy/greedy.hpp"
#include "lindy/random.hpp"

using namespace lindy;

namespace {

BasisContext<double> ctx2(double p = 1.0, Index max_k = 600) {
  return BasisContext<double>(make_tables_for_basis(DeltaSpec::constant(2), max_k), PContext::make(p));
}

} // namespace

TEST_CASE("greedy projection on a two-term vector") {
  auto ctx = ctx2();
  auto a = CoeffVector<double>::from_entries({{1, 1.0}, {2, 0.3}});
  auto out = greedy_projection(ctx, a, 1);
  CHECK(out.greedy_set == std::vector<Index>{1});
  CHECK(out.input_pow == doctest::Approx(2.0));
  CHECK(out.residual_pow == doctest::Approx(0.6)); // 0.3 * ||x_2||
  CHECK(out.residual_pow / out.input_pow == doctest::Approx(0.3));

  auto zero = greedy_projection(ctx, a, 0);
  CHECK(zero.projection.empty());
  CHECK(zero.residual == a);
  auto all = greedy_projection(ctx, a, 5);
  CHECK(all.projection == a);
  CHECK(all.residual.empty());
}

TEST_CASE("restricted truncation flattens to the minimal greedy magnitude") {
  auto ctx = ctx2();
  auto a = CoeffVector<double>::from_entries({{1, 1.0}, {2, 0.3}});
  auto u = restricted_truncation(ctx, a, 2);
  CHECK(u.at(1) == doctest::Approx(0.3));
  CHECK(u.at(2) == doctest::Approx(0.3));
  auto first = restricted_truncation(ctx, a, 1);
  CHECK(first.at(1) == doctest::Approx(1.0));
  CHECK(first.support_size() == 1);

  auto ties = CoeffVector<double>::from_entries({{3, -0.5}, {7, 0.5}, {9, 0.5}});
  auto u2 = restricted_truncation(ctx, ties, 2);
  CHECK(u2.at(3) == doctest::Approx(-0.5)); // signs preserved, lowest indices first
  CHECK(u2.at(7) == doctest::Approx(0.5));
  CHECK(u2.at(9) == 0.0);
  CHECK_THROWS_AS(restricted_truncation(ctx, CoeffVector<double>{}, 1), ConfigError);

  // boundedness witness over a random family
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    TrialRng rng(41, trial);
    auto entries = random_coefficients(rng, 256, 20);
    auto f = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
    size_t m = 1 + static_cast<size_t>(rng.next_u64() % f.support_size());
    double num = synthesize(ctx, restricted_truncation(ctx, f, m)).p_norm(1.0);
    double den = synthesize(ctx, f).p_norm(1.0);
    worst = std::max(worst, num / den);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst > 0.0);
}

TEST_CASE("coordinate projection restricts coefficients") {
  auto ctx = ctx2();
  auto a = CoeffVector<double>::from_entries({{1, 1.0}, {2, 0.3}});
  CHECK(coordinate_projection(a, {}).empty());
  std::vector<Index> all{1, 2};
  CHECK(coordinate_projection(a, all) == a);
  std::vector<Index> two{2};
  auto s = coordinate_projection(a, two);
  CHECK(synthesize(ctx, s).p_norm(1.0) == doctest::Approx(0.6));
}

TEST_CASE("tie-breaking picks the lexicographically least greedy set") {
  auto ctx = ctx2();
  auto a = CoeffVector<double>::from_entries({{2, 0.5}, {5, -0.5}, {9, 0.5}, {11, 0.5}});
  auto out = greedy_projection(ctx, a, 2);
  CHECK(out.greedy_set == std::vector<Index>{2, 5});
}

TEST_CASE("quasi-greedy scan stays under the theorem constants") {
  for (double p : {1.0, 0.5}) {
    auto ctx = ctx2(p);
    ScanConfig cfg{800, 256, 7, 48};
    auto r = quasi_greedy_scan(ctx, cfg);
    CHECK(r.max_residual_ratio <= qg_residual_bound(p) * (1 + 1e-9));
    CHECK(r.max_projection_ratio <= qg_projection_bound(p) * (1 + 1e-9));
    CHECK(r.max_residual_ratio > 0.5); // the scan does find nontrivial inputs
  }
  CHECK(qg_residual_bound(1.0) == doctest::Approx(2.0));
  CHECK(qg_projection_bound(1.0) == doctest::Approx(3.0));
  CHECK(qg_residual_bound(0.5) == doctest::Approx(4.0));
  CHECK(qg_projection_bound(0.5) == doctest::Approx(16.0 / 3.0));

  // single-coefficient inputs never overshoot
  auto ctx = ctx2();
  auto single = CoeffVector<double>::unit(9, 0.4);
  for (size_t m : {size_t(0), size_t(1), size_t(3)}) {
    auto out = greedy_projection(ctx, single, m);
    CHECK(out.projection_pow <= out.input_pow * (1 + 1e-12));
    CHECK(out.residual_pow <= out.input_pow * (1 + 1e-12));
  }
}

TEST_CASE("scan results are reproducible and incremental norms are right") {
  auto ctx = ctx2();
  ScanConfig cfg{100, 128, 9, 24};
  auto a = quasi_greedy_scan(ctx, cfg);
  auto b = quasi_greedy_scan(ctx, cfg);
  CHECK(a.max_residual_ratio == b.max_residual_ratio);
  CHECK(a.max_projection_ratio == b.max_projection_ratio);
  CHECK(a.witness == b.witness);

  // cross-check one trial against the direct greedy_projection computation
  TrialRng rng(9, a.residual_witness_trial);
  auto entries = random_coefficients(rng, 128, 24);
  auto coeffs = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
  double worst = 0.0;
  double input = synthesize(ctx, coeffs).p_norm(1.0);
  for (size_t m = 1; m <= coeffs.support_size(); ++m) {
    auto out = greedy_projection(ctx, coeffs, m);
    worst = std::max(worst, std::pow(out.residual_pow, 1.0) / input);
  }
  CHECK(worst == doctest::Approx(a.max_residual_ratio).epsilon(1e-9));
}

TEST_CASE("democracy: the indicator of {1,2} has norm 3") {
  auto ctx = ctx2();
  auto one = CoeffVector<double>::from_entries({{1, 1.0}, {2, 1.0}});
  CHECK(synthesize(ctx, one).p_norm(1.0) == doctest::Approx(3.0));
  CHECK(democracy_lower(1.0, 2) == doctest::Approx(1.0));
  CHECK(democracy_upper(1.0, 2) == doctest::Approx(4.0));
  CHECK(synthesize(ctx, CoeffVector<double>::unit(4)).p_norm(1.0) == doctest::Approx(2.0));
}

TEST_CASE("democracy upper constant is sharp beyond 2 m^{1/p} for p < 1") {
  // x_1 - x_2 at p = 1/2: power sum 1 + sqrt(5)/2 + 3/2, norm its square
  auto ctx = ctx2(0.5);
  auto alt = CoeffVector<double>::from_entries({{1, 1.0}, {2, -1.0}});
  double norm = synthesize(ctx, alt).p_norm(0.5);
  double m_pow = std::pow(2.0, 1.0 / 0.5);
  CHECK(norm > 2.0 * m_pow);                // exceeds the 2 m^{1/p} display
  CHECK(norm <= democracy_upper(0.5, 2.0)); // stays below (2m)^{1/p}
  CHECK(norm == doctest::Approx(std::pow(1.0 + std::sqrt(1.25) + 1.5, 2.0)));
}

TEST_CASE("democracy scan holds on a non-constant delta at p = 1/2") {
  auto tables = make_tables_for_basis(DeltaSpec::explicit_list({2, 3, 4, 5}, 6), 600);
  BasisContext<double> ctx(tables, PContext::make(0.5));
  std::vector<Index> ms{1, 2, 8, 32, 128};
  for (const auto& s : democracy_scan(ctx, ms, 64, 7)) CHECK(s.pass);
}

TEST_CASE("greedy convergence and SUCC") {
  auto ctx = ctx2();
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    TrialRng rng(53, trial);
    auto entries = random_coefficients(rng, 64, 12);
    auto f = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
    auto out = greedy_projection(ctx, f, f.support_size());
    CHECK(out.residual.empty());
  }
  auto succ = succ_scan(ctx, ScanConfig{300, 256, 13, 48});
  CHECK(succ.pass);
}

TEST_CASE("lebesgue interval arithmetic") {
  auto iv = lebesgue_bounds(1.0, 1.0, 4.0, 4.0);
  CHECK(iv.lower == doctest::Approx(1.0));
  CHECK(iv.upper == doctest::Approx(20.0)); // (1 + 4/1) * 4
  auto unit = lebesgue_bounds(1.0, 1.0, 1.0, 1.0);
  CHECK(unit.upper == doctest::Approx(2.0));
  CHECK_THROWS_AS(lebesgue_bounds(1.0, 4.0, 1.0, 4.0), ConfigError);
  CHECK_THROWS_AS(lebesgue_bounds(1.0, 1.0, 4.0, 0.5), ConfigError);
}
