#include <doctest.h>

#include "lindy/basis.hpp"
#include "lindy/random.hpp"

using namespace lindy;

namespace {

template <class S> BasisContext<S> make_ctx(const DeltaSpec& spec, double p, Index max_k) {
  return BasisContext<S>(make_tables_for_basis(spec, max_k), PContext::make(p));
}

Rational rat(long long num, long long den = 1) { return Rational(BigInt(num), BigInt(den)); }

// brute-force synthesis oracle: accumulate a_k * x_k term by term
template <class S> SparseVector<S> synth_oracle(const BasisContext<S>& ctx, const CoeffVector<S>& a) {
  SparseVector<S> acc;
  for (const auto& [k, v] : a.entries()) acc = acc.plus(basis_vector(ctx, k).scaled(v));
  return acc;
}

} // namespace

TEST_CASE("basis vectors in the classical case") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 1.0, 16);
  CHECK(basis_vector(ctx, 1) ==
        SparseVector<Rational>::from_entries({{1, rat(1)}, {2, rat(-1, 2)}, {3, rat(-1, 2)}}));
  CHECK(basis_vector(ctx, 2) ==
        SparseVector<Rational>::from_entries({{2, rat(1)}, {4, rat(-1, 2)}, {5, rat(-1, 2)}}));
}

TEST_CASE("basis vector power sum is exactly 2 for every delta and p") {
  for (auto spec : {DeltaSpec::constant(2), DeltaSpec::explicit_list({2, 3, 4, 5, 6, 7}, 8), DeltaSpec::power(0.5)}) {
    for (double p : {1.0, 0.5}) {
      auto ctx = make_ctx<Rational>(spec, p, 64);
      for (Index k = 1; k <= 64; ++k) {
        auto pow = exact_power_sum(basis_vector(ctx, k), *ctx.pctx().q);
        REQUIRE(pow.has_value());
        CHECK(*pow == 2);
      }
    }
  }
}

TEST_CASE("dual vectors walk the orbit") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 1.0, 16);
  CHECK(dual_vector(ctx, 1) == SparseVector<Rational>::unit(1, rat(1)));
  CHECK(dual_vector(ctx, 3) == SparseVector<Rational>::from_entries({{3, rat(1)}, {1, rat(1, 2)}}));
  CHECK(dual_vector(ctx, 5) ==
        SparseVector<Rational>::from_entries({{5, rat(1)}, {2, rat(1, 2)}, {1, rat(1, 4)}}));
  CHECK(pairing(dual_vector(ctx, 5), basis_vector(ctx, 2)) == 0);
  for (Index j = 1; j <= 16; ++j) {
    CHECK(dual_vector(ctx, j).sup_norm() == 1);
    CHECK(dual_vector(ctx, j).at(j) == 1);
    CHECK(dual_vector(ctx, j).max_support() == j);
  }
}

TEST_CASE("biorthogonality is exact across deltas and exponents") {
  for (auto spec : {DeltaSpec::constant(2), DeltaSpec::explicit_list({3, 2, 5, 2, 4, 6}, 6)}) {
    for (double p : {1.0, 0.5}) {
      auto ctx = make_ctx<Rational>(spec, p, 48);
      std::vector<SparseVector<Rational>> duals;
      for (Index j = 1; j <= 48; ++j) duals.push_back(dual_vector(ctx, j));
      for (Index k = 1; k <= 48; ++k) {
        auto xk = basis_vector(ctx, k);
        for (Index j = 1; j <= 48; ++j) CHECK(pairing(duals[j - 1], xk) == rat(j == k ? 1 : 0));
      }
    }
  }
}

TEST_CASE("every coordinate j >= 2 is written by exactly two basis vectors") {
  auto ctx = make_ctx<Rational>(DeltaSpec::explicit_list({2, 4, 3, 2, 5}, 3), 1.0, 40);
  const auto& t = ctx.tables();
  for (Index j = 2; j <= 40; ++j) {
    Index writers = 0;
    for (Index k = 1; k <= 40; ++k) {
      Rational val = basis_vector(ctx, k).at(j);
      if (val == 0) continue;
      ++writers;
      if (k == j)
        CHECK(val == 1);
      else {
        CHECK(k == t.rho(j));
        CHECK(val == -ctx.weight(k));
        CHECK(val < 0);
      }
    }
    CHECK(writers == 2);
  }
}

TEST_CASE("synthesize matches the closed form and the accumulation oracle") {
  auto ctx = make_ctx<double>(DeltaSpec::constant(2), 1.0, 64);
  auto a = CoeffVector<double>::from_entries({{1, 1.0}, {2, 0.3}});
  auto x = synthesize(ctx, a);
  CHECK(x.at(1) == doctest::Approx(1.0));
  CHECK(x.at(2) == doctest::Approx(-0.2));
  CHECK(x.at(3) == doctest::Approx(-0.5));
  CHECK(x.at(4) == doctest::Approx(-0.15));
  CHECK(x.at(5) == doctest::Approx(-0.15));
  CHECK(x.power_sum(1.0) == doctest::Approx(2.0));
  CHECK(synthesize(ctx, CoeffVector<double>{}).empty());

  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    TrialRng rng(3, trial);
    auto entries = random_coefficients(rng, 48, 12);
    auto coeffs = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
    auto direct = synthesize(ctx, coeffs);
    auto oracle = synth_oracle(ctx, coeffs);
    CHECK(direct.minus(oracle).sup_norm() <= 1e-14);
  }
}

TEST_CASE("analyze inverts synthesize and reads the head column") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 1.0, 64);
  auto a = CoeffVector<Rational>::from_entries({{2, rat(1)}});
  CHECK(analyze(ctx, synthesize(ctx, a), 16) == a);

  auto coeffs = analyze(ctx, SparseVector<Rational>::unit(1), 8);
  // head column: 1, 1/2, 1/2, 1/4, 1/4, 1/4, 1/4, 1/8
  std::vector<Rational> expect{rat(1),    rat(1, 2), rat(1, 2), rat(1, 4),
                               rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 8)};
  for (Index j = 1; j <= 8; ++j) CHECK(coeffs.at(j) == expect[j - 1]);
  CHECK(analyze(ctx, SparseVector<Rational>{}, 8).empty());

  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    TrialRng rng(5, trial);
    std::vector<CoeffVector<Rational>::Entry> entries;
    for (int i = 0; i < 6; ++i)
      entries.push_back({rng.uniform_index(30), rat(static_cast<long long>(rng.next_u64() % 17) - 8, 4)});
    auto c = CoeffVector<Rational>::from_entries(std::move(entries));
    CHECK(analyze(ctx, synthesize(ctx, c), 30) == c);
  }
}

TEST_CASE("column level sums are exactly one") {
  for (auto spec : {DeltaSpec::constant(2), DeltaSpec::explicit_list({2, 3, 4, 5}, 5)}) {
    for (double p : {1.0, 0.5}) {
      auto ctx = make_ctx<Rational>(spec, p, 700);
      const auto& t = ctx.tables();
      for (Index k : {Index(1), Index(2), Index(5)}) {
        for (Index n = 0; n <= 3; ++n) {
          auto block = t.block_interval(k, n);
          if (block.hi > 700) break;
          Rational sum(0);
          for (Index j = block.lo; j < block.hi; ++j) {
            auto root = exact_abs_root(dual_vector(ctx, j).at(k), *ctx.pctx().q);
            REQUIRE(root.has_value());
            CHECK(*root <= Rational(1, BigInt(1) << n)); // entry decay 2^{-n} in p-power
            sum += *root;
          }
          CHECK(sum == 1);
        }
      }
    }
  }
}

TEST_CASE("orbit recursion: a parent entry is the weighted child entry") {
  // whenever sigma(k) lies on the orbit of j, x*_j(k) = w_k x*_j(sigma(k));
  // in general the weighted child is the orbit point inside [sigma(k), sigma(k+1))
  auto ctx = make_ctx<Rational>(DeltaSpec::explicit_list({2, 3, 2, 4}, 3), 1.0, 200);
  const auto& t = ctx.tables();
  for (Index j = 2; j <= 200; ++j) {
    auto dv = dual_vector(ctx, j);
    for (const auto& [k, value] : dv.entries()) {
      if (k == j) continue;
      // k is a proper orbit point: exactly one support point lies in its block
      Rational child(0);
      for (Index c = t.sigma(k); c < t.sigma(k + 1); ++c) child += dv.at(c);
      CHECK(value == ctx.weight(k) * child);
    }
  }
}

TEST_CASE("column q-sums are bounded") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 0.5, 4096);
  // q = 1 > p = 1/2: sum_j |x*_j(k)| <= 1/(1 - 2^{-1}) = 2
  for (Index k : {Index(1), Index(3)}) {
    Rational sum(0);
    for (Index j = 1; j <= 4096; ++j) sum += dual_vector(ctx, j).at(k);
    CHECK(sum <= 2);
  }
}

TEST_CASE("section witness reproduces a unit vector with power sum 2") {
  auto ctx = make_ctx<Rational>(DeltaSpec::explicit_list({2, 3, 2, 4, 2, 2, 3}, 3), 1.0, 64);
  for (Index N : {Index(4), Index(9)}) {
    for (Index j = 1; j <= N; ++j) {
      auto x = section_witness(ctx, j, N);
      auto pow = exact_power_sum(x, 1);
      REQUIRE(pow.has_value());
      CHECK(*pow == 2);
      for (Index i = 1; i <= N; ++i) CHECK(x.at(i) == rat(i == j ? 1 : 0));
    }
  }
}

TEST_CASE("triangularized sections") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 1.0, 32);
  auto xs = orthogonalized_section(ctx, 2);
  REQUIRE(xs.size() == 2);
  CHECK(xs[0] == SparseVector<Rational>::from_entries(
                     {{1, rat(1)}, {3, rat(-1, 2)}, {4, rat(-1, 4)}, {5, rat(-1, 4)}}));
  CHECK(xs[1] == basis_vector(ctx, 2));

  // residues live above n with power sum exactly 1
  for (Index n : {Index(3), Index(7)}) {
    auto list = orthogonalized_section(ctx, n);
    for (Index k = 1; k <= n; ++k) {
      auto r = list[k - 1].minus(SparseVector<Rational>::unit(k));
      auto pow = exact_power_sum(r, 1);
      REQUIRE(pow.has_value());
      CHECK(*pow == 1);
      CHECK(r.entries().front().first >= n + 1);
      CHECK(r.max_support() < ctx.tables().sigma(n + 1));
    }
  }
}

TEST_CASE("section sandwich on random coefficients") {
  auto ctx = make_ctx<double>(DeltaSpec::constant(2), 0.5, 64);
  auto xs = orthogonalized_section(ctx, 12);
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    TrialRng rng(17, trial);
    SparseVector<double> combo;
    double coeff_pow = 0.0;
    for (Index k = 1; k <= 12; ++k) {
      double c = rng.sign() * rng.log_uniform(1e-2, 1.0);
      coeff_pow += ppow(c, 0.5);
      combo = combo.plus(xs[k - 1].scaled(c));
    }
    double pow = combo.power_sum(0.5);
    CHECK(pow >= coeff_pow * (1 - 1e-9));
    CHECK(pow <= 2.0 * coeff_pow * (1 + 1e-9)); // distance bound 2^{1/p} in p-power
  }
}

TEST_CASE("prefix norms are monotone") {
  auto ctx = make_ctx<double>(DeltaSpec::explicit_list({2, 3, 4}, 5), 0.5, 64);
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    TrialRng rng(23, trial);
    std::vector<CoeffVector<double>::Entry> entries;
    for (Index k = 1; k <= 16; ++k) entries.push_back({k, rng.sign() * rng.log_uniform(1e-2, 1.0)});
    auto a = CoeffVector<double>::from_entries(std::move(entries));
    double prev = 0.0;
    for (Index n = 1; n <= 16; ++n) {
      auto prefix = a.filtered([&](Index k) { return k <= n; });
      double norm = synthesize(ctx, prefix).power_sum(0.5);
      CHECK(norm >= prev * (1 - 1e-12));
      prev = norm;
    }
  }
}

TEST_CASE("embedding: first unit vector maps to half of x_2") {
  auto ctx = make_ctx<Rational>(DeltaSpec::constant(2), 1.0, 16);
  auto [image, recovered] = embed_and_project(ctx, SparseVector<Rational>::unit(1));
  CHECK(image == basis_vector(ctx, 2).scaled(rat(1, 2)));
  CHECK(recovered == SparseVector<Rational>::unit(1));
  auto [zi, zr] = embed_and_project(ctx, SparseVector<Rational>{});
  CHECK(zi.empty());
  CHECK(zr.empty());
}

TEST_CASE("embedding is an isometry with exact left inverse") {
  for (auto spec : {DeltaSpec::constant(2), DeltaSpec::explicit_list({2, 2, 3, 3, 4, 4, 5}, 5)}) {
    auto ctx = BasisContext<Rational>(make_tables_for_basis(spec, 600), PContext::make(1.0));
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      TrialRng rng(31, trial);
      std::vector<SparseVector<Rational>::Entry> entries;
      for (int i = 0; i < 8; ++i)
        entries.push_back({rng.uniform_index(40), rat(static_cast<long long>(rng.next_u64() % 19) - 9, 8)});
      auto x = SparseVector<Rational>::from_entries(std::move(entries));
      auto [image, recovered] = embed_and_project(ctx, x);
      CHECK(recovered == x);
      if (!x.empty()) CHECK(*exact_power_sum(image, 1) == *exact_power_sum(x, 1));
    }
  }
}

TEST_CASE("projection is bounded by 2 in p-power on arbitrary inputs") {
  auto ctx = make_ctx<double>(DeltaSpec::constant(2), 1.0, 600);
  LevelEmbedding<double> emb(ctx, 64);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    TrialRng rng(37, trial);
    auto entries = random_coefficients(rng, 500, 40);
    auto y = SparseVector<double>::from_entries({entries.begin(), entries.end()});
    double ratio = emb.project(y).power_sum(1.0) / std::max(y.power_sum(1.0), 1e-300);
    CHECK(ratio <= 2.0 * (1 + 1e-12));
  }
}
