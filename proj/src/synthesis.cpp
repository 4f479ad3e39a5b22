#include "lindy/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lindy {

namespace {

using u128 = unsigned __int128;

Index ceil_div(Index a, Index b) { return a / b + (a % b != 0); }

// h restricted to [M_{n-1}, M_n]: max of the two integer-sloped secants.
Index interpolant(const std::vector<Index>& m, size_t n, Index t) {
  Index a_num = m[n + 1] - m[n];
  Index a_den = m[n] - m[n - 1];
  Index floor_a = a_num / a_den;
  Index ceil_a = ceil_div(a_num, a_den);
  u128 f = static_cast<u128>(m[n]) + static_cast<u128>(floor_a) * (t - m[n - 1]);
  u128 g_sub = static_cast<u128>(ceil_a) * (m[n] - t);
  u128 g = g_sub > static_cast<u128>(m[n + 1]) ? 0 : static_cast<u128>(m[n + 1]) - g_sub;
  u128 h = std::max(f, g);
  if (h > std::numeric_limits<Index>::max()) throw CapacityError("interpolant overflows index type");
  return static_cast<Index>(h);
}

} // namespace

MilestoneValidation validate_milestones(const MilestoneSequence& m) {
  const auto& v = m.values;
  auto fail = [](size_t n, std::string detail) {
    return MilestoneValidation{false, n, std::move(detail)};
  };
  if (v.size() < 3) return fail(0, "need at least M_0, M_1, M_2");
  if (v[0] != 1) return fail(0, "M_0 must be 1");
  if (v[1] != 2) return fail(1, "M_1 must be 2");
  if (v[2] < 4) return fail(2, "M_2 must be >= 4");
  for (size_t n = 1; n < v.size(); ++n)
    if (v[n] <= v[n - 1]) return fail(n, "milestones must be strictly increasing");
  for (size_t n = 1; n + 2 < v.size(); ++n) {
    Index lhs = ceil_div(v[n + 1] - v[n], v[n] - v[n - 1]);
    Index rhs = (v[n + 2] - v[n + 1]) / (v[n + 1] - v[n]);
    if (lhs > rhs) {
      std::ostringstream os;
      os << "ratio chain fails at n=" << n << ": ceil=" << lhs << " > floor=" << rhs;
      return fail(n, os.str());
    }
  }
  return {true, std::nullopt, ""};
}

DeltaSpec delta_from_milestones(const MilestoneSequence& m, Index max_terms) {
  auto validation = validate_milestones(m);
  if (!validation.ok) throw ConfigError("invalid milestones: " + validation.detail);
  const auto& v = m.values;
  // h is defined on [M_0, M_{L-1}]; the last milestone only shapes the final piece.
  Index domain_end = v[v.size() - 2];
  Index terms = std::min<Index>(max_terms, domain_end - 1);
  std::vector<Index> delta;
  delta.reserve(static_cast<size_t>(terms));
  size_t piece = 1;
  Index h_prev = 2; // h(1) = M_1
  for (Index t = 2; t <= terms + 1; ++t) {
    while (v[piece] < t) ++piece;
    Index h_t = interpolant(v, piece, t);
    if (h_t < h_prev + 2) throw CheckFailure("interpolant produced d < 2 at t=" + std::to_string(t));
    delta.push_back(h_t - h_prev);
    h_prev = h_t;
  }
  auto spec = DeltaSpec::table(std::move(delta));
  spec.set_nondecreasing(true);
  return spec;
}

ConcaveSpec ConcaveSpec::parse(const std::string& phi, Index target_length) {
  ConcaveSpec spec;
  spec.target_length = target_length;
  if (phi == "log1p") {
    spec.family = Family::Log1p;
    return spec;
  }
  if (phi.rfind("pow:", 0) == 0) {
    spec.family = Family::Power;
    try {
      spec.exponent = std::stod(phi.substr(4));
    } catch (const std::exception&) {
      throw ConfigError("phi pow: cannot parse exponent '" + phi + "'");
    }
    if (!(spec.exponent > 0.0) || spec.exponent > 1.0)
      throw ConfigError("phi pow exponent must lie in (0, 1]");
    return spec;
  }
  throw ConfigError("unknown phi family '" + phi + "' (expected pow:<c> or log1p)");
}

double ConcaveSpec::phi(double x) const {
  return family == Family::Power ? std::pow(x, exponent) : std::log1p(x);
}

double ConcaveSpec::psi(double y) const {
  if (y <= 0.0) return 0.0;
  // grow a bracket geometrically, then bisect to 1e-12
  double hi = 1.0;
  while (phi(hi) < y) {
    hi *= 2.0;
    if (hi > 1e300) throw ConfigError("psi bracket overflow");
  }
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string ConcaveSpec::describe() const {
  if (family == Family::Log1p) return "log1p";
  std::ostringstream os;
  os << "pow:" << exponent;
  return os.str();
}

Index milestone_gamma(const MilestoneSequence& m, Index value) {
  const auto& v = m.values;
  if (value < 1 || value >= v.back()) throw CapacityError("milestone_gamma out of range");
  auto it = std::upper_bound(v.begin(), v.end(), value);
  return static_cast<Index>(it - v.begin()) - 1;
}

namespace {

void measure_band(const ConcaveSpec& spec, SynthesisDiagnostics& diag) {
  const auto& v = diag.milestones.values;
  if (v.size() < 3 || v[v.size() - 2] <= 4) return;
  diag.band_lo = 1e300;
  diag.band_hi = 0.0;
  for (double m = 4; m < static_cast<double>(v[v.size() - 2]); m *= 1.7) {
    double gamma = static_cast<double>(milestone_gamma(diag.milestones, static_cast<Index>(m)));
    double ratio = gamma / spec.phi(std::log(m));
    diag.band_lo = std::min(diag.band_lo, ratio);
    diag.band_hi = std::max(diag.band_hi, ratio);
  }
}

} // namespace

SynthesisResult delta_from_concave(const ConcaveSpec& spec) {
  if (spec.target_length < 3) throw ConfigError("synthesis needs target_length >= 3");

  // Near-linear phi is the constant-2 regime: Gamma(m) ~ log2(m) ~ phi(log m).
  if (spec.family == ConcaveSpec::Family::Power && spec.exponent == 1.0) {
    SynthesisResult out{DeltaSpec::constant(2), {}};
    MilestoneSequence ms;
    Index v = 1;
    while (v <= (Index(1) << 62) / 2) {
      ms.values.push_back(v);
      v *= 2;
    }
    out.diagnostics.milestones = std::move(ms);
    out.diagnostics.produced_terms = spec.target_length;
    out.diagnostics.note = "phi ~ x: classical constant-2 sequence";
    measure_band(spec, out.diagnostics);
    return out;
  }

  // M(x) = floor(e^{psi(x)}); long double keeps the floor faithful until the
  // values leave the 64-bit range.
  auto big_m = [&](Index x) -> std::optional<Index> {
    long double e = expl(static_cast<long double>(spec.psi(static_cast<double>(x))));
    if (e >= static_cast<long double>(std::numeric_limits<Index>::max()) / 4) return std::nullopt;
    return static_cast<Index>(floorl(e));
  };

  constexpr Index a_max = 64;
  for (Index a = 0; a <= a_max; ++a) {
    auto ma = big_m(a), ma1 = big_m(a + 1);
    if (!ma || !ma1) break;
    if (*ma1 < *ma + 2) continue;
    Index gap = *ma1 - *ma;
    Index b = 0;
    while ((Index(1) << (b + 1)) <= gap) ++b;

    // milestones: 2^n below the crossover, shifted M beyond it
    MilestoneSequence ms;
    for (Index n = 0; n <= b; ++n) ms.values.push_back(Index(1) << n);
    bool truncated = false;
    for (Index n = b + 1;; ++n) {
      auto mv = big_m(n - b + a);
      if (!mv) {
        truncated = true;
        break;
      }
      Index value = *mv - *ma + (Index(1) << b);
      ms.values.push_back(value);
      // h lives on [1, M_{L-1}]; stop once the next-to-last milestone covers
      // every requested term
      if (ms.values.size() >= 2 && ms.values[ms.values.size() - 2] >= spec.target_length + 1) break;
    }
    if (ms.values.size() < 3) continue;

    // eligibility: the ratio chain at the integer points actually used,
    // including the spelled-out slack of 5 on the shifted range
    auto validation = validate_milestones(ms);
    if (!validation.ok) continue;
    bool slack_ok = true;
    for (size_t n = static_cast<size_t>(b) + 1; n + 2 < ms.values.size(); ++n) {
      Index lhs = ceil_div(ms.values[n + 1] - ms.values[n], ms.values[n] - ms.values[n - 1]);
      if (lhs < 5) {
        slack_ok = false;
        break;
      }
    }
    if (!slack_ok) continue;

    Index covered = ms.values[ms.values.size() - 2] - 1;
    Index produced = std::min<Index>(spec.target_length, covered);
    SynthesisResult out{delta_from_milestones(ms, produced), {}};
    out.diagnostics.milestones = std::move(ms);
    out.diagnostics.offset_a = a;
    out.diagnostics.offset_b = b;
    out.diagnostics.truncated = truncated && produced < spec.target_length;
    out.diagnostics.produced_terms = produced;
    if (out.diagnostics.truncated)
      out.diagnostics.note = "target_length truncated to fit the index type";
    measure_band(spec, out.diagnostics);
    return out;
  }
  throw ConfigError("synthesis: no offset a <= 64 satisfies the ratio conditions for " + spec.describe());
}

} // namespace lindy
