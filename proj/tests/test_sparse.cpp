#include <doctest.h>

#include <sstream>

#include "lindy/random.hpp"
#include "lindy/sparse.hpp"

using namespace lindy;

TEST_CASE("pcontext detects integral 1/p") {
  CHECK(PContext::make(1.0).q == 1u);
  CHECK(PContext::make(0.5).q == 2u);
  CHECK(PContext::make(1.0 / 3.0).q == 3u);
  CHECK_FALSE(PContext::make(0.7).q.has_value());
  CHECK_THROWS_AS(PContext::make(0.0), ConfigError);
  CHECK_THROWS_AS(PContext::make(1.5), ConfigError);
}

TEST_CASE("power sums: unit entries at p = 1/2") {
  auto v = SparseVector<double>::from_entries({{1, 1.0}, {2, 1.0}});
  CHECK(v.power_sum(0.5) == doctest::Approx(2.0));
  CHECK(v.p_norm(0.5) == doctest::Approx(4.0));
  CHECK(SparseVector<double>{}.power_sum(0.5) == 0.0);
}

TEST_CASE("the first basis vector has ell_1 norm 2") {
  auto v = SparseVector<double>::from_entries({{1, 1.0}, {2, -0.5}, {3, -0.5}});
  CHECK(v.power_sum(1.0) == doctest::Approx(2.0));
}

TEST_CASE("sup norm") {
  CHECK(SparseVector<double>::unit(1).sup_norm() == 1.0);
  auto v = SparseVector<double>::from_entries({{1, 1.0}, {2, 0.5}});
  CHECK(v.sup_norm() == 1.0);
  auto alt = SparseVector<double>::from_entries({{1, -1.0}, {2, 1.0}, {3, -1.0}});
  CHECK(alt.sup_norm() == 1.0);
}

TEST_CASE("restrict, add, scale, pairing") {
  auto v = SparseVector<double>::from_entries({{1, 1.0}, {2, 1.0}});
  std::vector<Index> set{1};
  CHECK(v.restricted(std::span<const Index>(set)) == SparseVector<double>::unit(1));
  auto u = SparseVector<double>::from_entries({{1, 1.0}, {2, 0.5}});
  CHECK(pairing(u, SparseVector<double>::unit(2)) == doctest::Approx(0.5));
  CHECK(u.plus(u.scaled(-1.0)).empty());
}

TEST_CASE("exact power sums engage only on perfect q-th powers") {
  auto v = SparseVector<Rational>::from_entries({{1, Rational(1, 4)}, {2, Rational(-1, 9)}});
  auto s = exact_power_sum(v, 2);
  REQUIRE(s.has_value());
  CHECK(*s == Rational(5, 6));
  auto bad = SparseVector<Rational>::from_entries({{1, Rational(1, 2)}});
  CHECK_FALSE(exact_power_sum(bad, 2).has_value());
  CHECK(*exact_power_sum(bad, 1) == Rational(1, 2));
}

TEST_CASE("p-triangle inequality and disjoint additivity") {
  for (double p : {1.0, 0.5, 0.3}) {
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      TrialRng rng(11, trial);
      auto ea = random_coefficients(rng, 48, 12);
      auto eb = random_coefficients(rng, 48, 12);
      auto u = SparseVector<double>::from_entries({ea.begin(), ea.end()});
      auto v = SparseVector<double>::from_entries({eb.begin(), eb.end()});
      CHECK(u.plus(v).power_sum(p) <= u.power_sum(p) + v.power_sum(p) + 1e-12);
    }
  }
  // disjoint supports: exact additivity of power sums in rational mode
  auto u = SparseVector<Rational>::from_entries({{1, Rational(1, 4)}, {2, Rational(1, 16)}});
  auto v = SparseVector<Rational>::from_entries({{5, Rational(9, 4)}});
  CHECK(*exact_power_sum(u.plus(v), 2) == *exact_power_sum(u, 2) + *exact_power_sum(v, 2));
}

TEST_CASE("serialization round trip") {
  auto v = SparseVector<Rational>::from_entries({{3, Rational(-1, 2)}, {7, Rational(5)}});
  std::stringstream ss;
  write_lines(ss, v);
  CHECK(read_lines<Rational>(ss) == v);
  auto d = SparseVector<double>::from_entries({{2, 0.25}, {9, -1.75}});
  std::stringstream sd;
  write_lines(sd, d);
  CHECK(read_lines<double>(sd) == d);
}

TEST_CASE("rational roots") {
  CHECK(*exact_nth_root(BigInt(64), 3) == 4);
  CHECK_FALSE(exact_nth_root(BigInt(63), 3).has_value());
  CHECK(*exact_abs_root(Rational(-8, 27), 3) == Rational(2, 3));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("3/4") == Rational(3, 4));
}
