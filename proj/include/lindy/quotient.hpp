// The recursive interval partition of [0,1), the weighted indicator images of
// the unit vectors, and the induced map onto step functions. Breakpoints are
// exact rationals in both scalar modes; in exact mode the weights
// |I_j|^{-1/p} = (prod d)^q are integers, so kernel and isometry checks run
// in pure rational arithmetic.
#pragma once

#include <ostream>
#include <vector>

#include "lindy/basis.hpp"
#include "lindy/rational.hpp"

namespace lindy {

struct DyadicInterval {
  Rational left;
  Rational right;
  std::vector<std::pair<Index, Index>> path; // (ancestor index, child ordinal), root first
  Rational length() const { return right - left; }
};

// I_1 = [0,1); for j in [sigma(k), sigma(k+1)), I_j is the (j - sigma(k))-th
// of the d_k equal parts of I_k.
inline DyadicInterval interval(const IndexTables& t, Index j) {
  if (j < 1) throw ConfigError("interval requires j >= 1");
  std::vector<std::pair<Index, Index>> path;
  Index v = j;
  while (v >= 2) {
    Index parent = t.rho(v);
    path.push_back({parent, v - t.sigma(parent)});
    v = parent;
  }
  std::reverse(path.begin(), path.end());
  DyadicInterval iv{Rational(0), Rational(1), path};
  Rational len(1);
  Rational left(0);
  for (const auto& [parent, ordinal] : path) {
    len /= static_cast<unsigned long long>(t.delta(parent));
    left += len * static_cast<unsigned long long>(ordinal);
  }
  iv.left = left;
  iv.right = left + len;
  return iv;
}

// Piecewise constant function on [0,1) with exact rational breakpoints;
// adjacent equal-value pieces are merged so representations are canonical.
template <class S> struct StepFunction {
  std::vector<Rational> breaks; // 0 = b_0 < ... < b_r = 1
  std::vector<S> values;        // value on [b_i, b_{i+1})

  static StepFunction zero() { return {{Rational(0), Rational(1)}, {S{}}}; }

  bool is_zero() const {
    for (const auto& v : values)
      if (!(v == 0)) return false;
    return true;
  }

  void normalize() {
    std::vector<Rational> nb{breaks.front()};
    std::vector<S> nv;
    for (size_t i = 0; i < values.size(); ++i) {
      if (!nv.empty() && nv.back() == values[i]) {
        nb.back() = breaks[i + 1];
      } else {
        nv.push_back(values[i]);
        nb.push_back(breaks[i + 1]);
      }
    }
    breaks = std::move(nb);
    values = std::move(nv);
  }
};

// The weight |I_j|^{-1/p} carried by the indicator of I_j.
template <class S> S interval_weight(const BasisContext<S>& ctx, const DyadicInterval& iv) {
  if constexpr (std::is_same_v<S, Rational>) {
    Rational inv = Rational(1) / iv.length();
    return rational_pow(inv, *ctx.pctx().q);
  } else {
    return std::pow(to_double(iv.length()), -1.0 / ctx.pctx().p);
  }
}

// Image of a finitely supported vector: sum v(j) |I_j|^{-1/p} 1_{I_j},
// flattened to the common refinement of the participating intervals.
template <class S> StepFunction<S> q_map(const BasisContext<S>& ctx, const SparseVector<S>& v) {
  if (v.empty()) return StepFunction<S>::zero();
  const auto& t = ctx.tables();
  struct Piece {
    Rational left, right;
    S weighted; // v(j) * weight_j
  };
  std::vector<Piece> pieces;
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (const auto& [j, value] : v.entries()) {
    DyadicInterval iv = interval(t, j);
    pieces.push_back({iv.left, iv.right, value * interval_weight(ctx, iv)});
    cuts.push_back(iv.left);
    cuts.push_back(iv.right);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  StepFunction<S> f;
  f.breaks = cuts;
  f.values.assign(cuts.size() - 1, S{});
  for (const auto& piece : pieces) {
    auto lo = std::lower_bound(cuts.begin(), cuts.end(), piece.left) - cuts.begin();
    auto hi = std::lower_bound(cuts.begin(), cuts.end(), piece.right) - cuts.begin();
    for (auto i = lo; i < hi; ++i) f.values[static_cast<size_t>(i)] += piece.weighted;
  }
  f.normalize();
  return f;
}

// (sum_i |value_i|^p (b_{i+1} - b_i))^{1/p} as a double.
template <class S> double step_power_sum(const StepFunction<S>& f, double p) {
  double acc = 0.0;
  for (size_t i = 0; i < f.values.size(); ++i)
    acc += ppow(to_double(f.values[i]), p) * to_double(f.breaks[i + 1] - f.breaks[i]);
  return acc;
}

template <class S> double step_p_norm(const StepFunction<S>& f, double p) {
  return std::pow(step_power_sum(f, p), 1.0 / p);
}

// CSV serialization: one row "t_left,t_right,value" per piece, rationals
// printed as num/den.
template <class S> void write_csv(std::ostream& out, const StepFunction<S>& f) {
  for (size_t i = 0; i < f.values.size(); ++i)
    out << to_string(f.breaks[i]) << ',' << to_string(f.breaks[i + 1]) << ','
        << ScalarOps<S>::str(f.values[i]) << '\n';
}

// Exact power sum; engaged iff every value is a perfect q-th power.
inline std::optional<Rational> exact_step_power_sum(const StepFunction<Rational>& f, unsigned q) {
  Rational acc(0);
  for (size_t i = 0; i < f.values.size(); ++i) {
    auto root = exact_abs_root(f.values[i], q);
    if (!root) return std::nullopt;
    acc += *root * (f.breaks[i + 1] - f.breaks[i]);
  }
  return acc;
}

} // namespace lindy
