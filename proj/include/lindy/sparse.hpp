// Finitely supported vectors with p-quasinorm and sup-norm arithmetic.
//
// Scalars are either double (float mode) or Rational (exact mode). Exact mode
// is available when 1/p = q is a positive integer; power sums are then exact
// whenever every entry is a perfect q-th power of a rational, and pairings and
// sup-norms are exact unconditionally.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "lindy/errors.hpp"
#include "lindy/indexing.hpp"
#include "lindy/rational.hpp"

namespace lindy {

struct PContext {
  double p = 1.0;
  std::optional<unsigned> q; // 1/p when it is a (small) positive integer

  static PContext make(double p) {
    if (!(p > 0.0) || p > 1.0) throw ConfigError("p must lie in (0, 1]");
    PContext ctx;
    ctx.p = p;
    double inv = 1.0 / p;
    double rounded = std::round(inv);
    if (std::fabs(inv - rounded) < 1e-9 && rounded >= 1 && rounded <= 64) {
      ctx.q = static_cast<unsigned>(rounded);
      ctx.p = 1.0 / rounded; // snap so that p*q == 1 in double arithmetic
    }
    return ctx;
  }
  bool exact_capable() const { return q.has_value(); }
};

// |a|^p with fast paths for the common exponents.
inline double ppow(double a, double p) {
  a = std::fabs(a);
  if (a == 0.0) return 0.0;
  if (p == 1.0) return a;
  if (p == 0.5) return std::sqrt(a);
  return std::pow(a, p);
}

template <class S> struct ScalarOps;

template <> struct ScalarOps<double> {
  static double from_int(long long n) { return static_cast<double>(n); }
  static double ratio(long long num, unsigned long long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double abs(double a) { return std::fabs(a); }
  static int sign(double a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
  static std::string str(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
  }
  static double parse(const std::string& s) { return std::stod(s); }
};

template <> struct ScalarOps<Rational> {
  static Rational from_int(long long n) { return Rational(n); }
  static Rational ratio(long long num, unsigned long long den) { return Rational(BigInt(num), BigInt(den)); }
  static Rational abs(const Rational& a) { return a < 0 ? Rational(-a) : a; }
  static int sign(const Rational& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
  static std::string str(const Rational& a) { return to_string(a); }
  static Rational parse(const std::string& s) { return parse_rational(s); }
};

struct coord_tag {};  // coordinates of the ambient sequence space
struct coeff_tag {};  // coefficients relative to the basis

// Sorted finitely supported index -> scalar map; no stored zeros.
template <class S, class Tag> class FlatVec {
public:
  using Entry = std::pair<Index, S>;

  FlatVec() = default;

  static FlatVec from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
      if (e.first < 1) throw ConfigError("coordinates must be >= 1");
      if (!out.empty() && out.back().first == e.first)
        out.back().second += e.second;
      else
        out.push_back(std::move(e));
    }
    std::erase_if(out, [](const Entry& e) { return e.second == 0; });
    FlatVec v;
    v.entries_ = std::move(out);
    return v;
  }

  static FlatVec unit(Index j, S value = ScalarOps<S>::from_int(1)) {
    return from_entries({{j, std::move(value)}});
  }

  const std::vector<Entry>& entries() const& { return entries_; }
  // rvalue access copies so that iterating a temporary's entries stays valid
  std::vector<Entry> entries() && { return std::move(entries_); }
  bool empty() const { return entries_.empty(); }
  size_t support_size() const { return entries_.size(); }
  Index max_support() const { return entries_.empty() ? 0 : entries_.back().first; }

  S at(Index j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                               [](const Entry& e, Index v) { return e.first < v; });
    if (it != entries_.end() && it->first == j) return it->second;
    return S{};
  }

  FlatVec plus(const FlatVec& other) const {
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin(), b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == entries_.end() || b->first < a->first) {
        merged.push_back(*b++);
      } else {
        S sum = a->second + b->second;
        if (!(sum == 0)) merged.push_back({a->first, std::move(sum)});
        ++a;
        ++b;
      }
    }
    FlatVec v;
    v.entries_ = std::move(merged);
    return v;
  }

  FlatVec minus(const FlatVec& other) const { return plus(other.scaled(ScalarOps<S>::from_int(-1))); }

  FlatVec scaled(const S& c) const {
    if (c == 0) return {};
    FlatVec v;
    v.entries_ = entries_;
    for (auto& e : v.entries_) e.second *= c;
    return v;
  }

  // axpy: this + c * other
  FlatVec plus_scaled(const S& c, const FlatVec& other) const { return plus(other.scaled(c)); }

  template <class Pred> FlatVec filtered(Pred&& keep) const {
    FlatVec v;
    for (const auto& e : entries_)
      if (keep(e.first)) v.entries_.push_back(e);
    return v;
  }

  FlatVec restricted(std::span<const Index> sorted_set) const {
    return filtered([&](Index j) { return std::binary_search(sorted_set.begin(), sorted_set.end(), j); });
  }

  FlatVec restricted(const std::vector<IndexInterval>& intervals) const {
    return filtered([&](Index j) {
      for (const auto& iv : intervals)
        if (iv.contains(j)) return true;
      return false;
    });
  }

  S sup_norm() const {
    S best{};
    for (const auto& e : entries_) best = std::max(best, ScalarOps<S>::abs(e.second));
    return best;
  }

  double power_sum(double p) const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += ppow(to_double(e.second), p);
    return acc;
  }

  double p_norm(double p) const { return std::pow(power_sum(p), 1.0 / p); }

  friend bool operator==(const FlatVec& a, const FlatVec& b) { return a.entries_ == b.entries_; }

private:
  std::vector<Entry> entries_;
};

template <class S> using SparseVector = FlatVec<S, coord_tag>;
template <class S> using CoeffVector = FlatVec<S, coeff_tag>;

// Natural pairing <u, v> = sum u(j) v(j); exact for rational scalars.
template <class S, class T1, class T2> S pairing(const FlatVec<S, T1>& u, const FlatVec<S, T2>& v) {
  S acc{};
  auto a = u.entries().begin();
  auto b = v.entries().begin();
  while (a != u.entries().end() && b != v.entries().end()) {
    if (a->first < b->first)
      ++a;
    else if (b->first < a->first)
      ++b;
    else {
      acc += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return acc;
}

// Exact power sum sum |v(j)|^{1/q}; engaged iff every entry is a perfect
// q-th power of a rational.
template <class Tag>
std::optional<Rational> exact_power_sum(const FlatVec<Rational, Tag>& v, unsigned q) {
  Rational acc(0);
  for (const auto& e : v.entries()) {
    auto root = exact_abs_root(e.second, q);
    if (!root) return std::nullopt;
    acc += *root;
  }
  return acc;
}

// Text serialization: one "index value" pair per line.
template <class S, class Tag> void write_lines(std::ostream& out, const FlatVec<S, Tag>& v) {
  for (const auto& e : v.entries()) out << e.first << ' ' << ScalarOps<S>::str(e.second) << '\n';
}

template <class S, class Tag = coord_tag> FlatVec<S, Tag> read_lines(std::istream& in) {
  std::vector<typename FlatVec<S, Tag>::Entry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Index j;
    std::string value;
    if (!(ls >> j >> value)) throw ConfigError("bad vector line: '" + line + "'");
    entries.push_back({j, ScalarOps<S>::parse(value)});
  }
  return FlatVec<S, Tag>::from_entries(std::move(entries));
}

} // namespace lindy
