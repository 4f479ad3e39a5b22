#include <doctest.h>

#include <sstream>

#include "lindy/quotient.hpp"
#include "lindy/random.hpp"

using namespace lindy;

namespace {

Rational rat(long long num, long long den = 1) { return Rational(BigInt(num), BigInt(den)); }

template <class S> BasisContext<S> ctx2(double p = 1.0, Index max_k = 300) {
  return BasisContext<S>(make_tables_for_basis(DeltaSpec::constant(2), max_k), PContext::make(p));
}

} // namespace

TEST_CASE("intervals of the classical partition") {
  auto tables = make_tables_for_basis(DeltaSpec::constant(2), 64);
  auto i1 = interval(*tables, 1);
  CHECK(i1.left == 0);
  CHECK(i1.right == 1);
  CHECK(interval(*tables, 2).left == 0);
  CHECK(interval(*tables, 2).right == rat(1, 2));
  CHECK(interval(*tables, 3).left == rat(1, 2));
  CHECK(interval(*tables, 5).left == rat(1, 4));
  CHECK(interval(*tables, 5).right == rat(1, 2));
  CHECK(interval(*tables, 5).path.size() == 2);
}

TEST_CASE("levels partition the unit interval with shrinking diameter") {
  auto tables = make_tables_for_basis(DeltaSpec::explicit_list({2, 3, 2, 4, 3, 2}, 3), 3000);
  for (Index n = 0; n <= 4; ++n) {
    auto level = tables->block_interval(1, n);
    Rational total(0), max_len(0);
    Rational prev_right(0);
    for (Index j = level.lo; j < level.hi; ++j) {
      auto iv = interval(*tables, j);
      CHECK(iv.left == prev_right); // consecutive, gap-free
      prev_right = iv.right;
      total += iv.length();
      max_len = std::max(max_len, iv.length());
    }
    CHECK(prev_right == 1);
    CHECK(total == 1);
    CHECK(max_len <= Rational(BigInt(1), BigInt(1) << n));
  }
}

TEST_CASE("weights satisfy weight^p * length = 1 exactly") {
  auto ctx = ctx2<Rational>(0.5, 64);
  for (Index j : {Index(1), Index(4), Index(9), Index(20)}) {
    auto iv = interval(ctx.tables(), j);
    Rational w = interval_weight(ctx, iv);
    auto root = exact_abs_root(w, 2); // w^p with p = 1/2
    REQUIRE(root.has_value());
    CHECK(*root * iv.length() == 1);
  }
}

TEST_CASE("unit vectors map to normalized indicators") {
  auto ctx = ctx2<Rational>();
  auto f = q_map(ctx, SparseVector<Rational>::unit(1));
  CHECK(f.values == std::vector<Rational>{rat(1)});
  CHECK(*exact_step_power_sum(f, 1) == 1);
  auto h2 = q_map(ctx, SparseVector<Rational>::unit(2));
  CHECK(h2.breaks == std::vector<Rational>{rat(0), rat(1, 2), rat(1)});
  CHECK(h2.values == std::vector<Rational>{rat(2), rat(0)});
  CHECK(*exact_step_power_sum(h2, 1) == 1);
}

TEST_CASE("basis vectors lie in the kernel, exactly") {
  for (double p : {1.0, 0.5}) {
    auto ctx = ctx2<Rational>(p, 128);
    for (Index k = 1; k <= 128; ++k) CHECK(q_map(ctx, basis_vector(ctx, k)).is_zero());
  }
  auto lctx = BasisContext<Rational>(make_tables_for_basis(DeltaSpec::explicit_list({3, 2, 5, 4}, 2), 64),
                                     PContext::make(1.0));
  for (Index k = 1; k <= 64; ++k) CHECK(q_map(lctx, basis_vector(lctx, k)).is_zero());
}

TEST_CASE("level isometry is exact on perfect-power coefficients") {
  auto ctx = ctx2<Rational>(0.5, 700);
  const auto& t = ctx.tables();
  for (Index n = 1; n <= 5; ++n) {
    auto level = t.block_interval(1, n);
    TrialRng rng(61, n);
    std::vector<SparseVector<Rational>::Entry> entries;
    for (Index j = level.lo; j < level.hi; ++j) {
      long long num = static_cast<long long>(rng.next_u64() % 9) - 4;
      Rational base = rat(num, 3);
      entries.push_back({j, base * base}); // perfect square => exact p-th powers at q = 2
    }
    auto v = SparseVector<Rational>::from_entries(std::move(entries));
    auto in_pow = exact_power_sum(v, 2);
    auto out_pow = exact_step_power_sum(q_map(ctx, v), 2);
    REQUIRE(in_pow.has_value());
    REQUIRE(out_pow.has_value());
    CHECK(*in_pow == *out_pow);
  }
}

TEST_CASE("the map is a contraction in p-power") {
  auto ctx = ctx2<double>(0.5, 300);
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    TrialRng rng(67, trial);
    auto entries = random_coefficients(rng, 256, 24);
    auto v = SparseVector<double>::from_entries({entries.begin(), entries.end()});
    CHECK(step_power_sum(q_map(ctx, v), 0.5) <= v.power_sum(0.5) * (1 + 1e-9));
  }
}

TEST_CASE("step function norms") {
  StepFunction<double> f{{0.0, 0.5, 1.0}, {2.0, 0.0}};
  CHECK(step_p_norm(f, 1.0) == doctest::Approx(1.0));
  CHECK(step_p_norm(StepFunction<double>::zero(), 1.0) == 0.0);
  StepFunction<double> c{{0.0, 1.0}, {1.0}};
  CHECK(step_p_norm(c, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("step function csv rows") {
  auto ctx = ctx2<Rational>();
  std::ostringstream os;
  write_csv(os, q_map(ctx, SparseVector<Rational>::unit(5)));
  CHECK(os.str() == "0,1/4,0\n1/4,1/2,4\n1/2,1,0\n");
}

TEST_CASE("adjacent equal pieces merge") {
  auto ctx = ctx2<Rational>();
  // e_2 + e_3 maps to the constant function 2 after merging
  auto f = q_map(ctx, SparseVector<Rational>::from_entries({{2, rat(1)}, {3, rat(1)}}));
  CHECK(f.breaks == std::vector<Rational>{rat(0), rat(1)});
  CHECK(f.values == std::vector<Rational>{rat(2)});
}
