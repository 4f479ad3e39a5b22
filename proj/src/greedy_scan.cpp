#include "lindy/greedy.hpp"

#include <sstream>
#include <unordered_map>

#include "lindy/parallel.hpp"
#include "lindy/random.hpp"

namespace lindy {

namespace {

// Coordinate map with an incrementally maintained power sum.
struct PowTracker {
  std::unordered_map<Index, double> coords;
  double pow_sum = 0.0;
  double p = 1.0;

  void bump(Index j, double delta) {
    auto [it, fresh] = coords.try_emplace(j, 0.0);
    double old = it->second;
    double next = old + delta;
    pow_sum += ppow(next, p) - ppow(old, p);
    if (next == 0.0)
      coords.erase(it);
    else
      it->second = next;
  }
};

struct TrialWorst {
  double residual = 0.0;
  double projection = 0.0;
  double truncation = 0.0;
};

// Runs the greedy algorithm for every m on one coefficient vector, updating
// the synthesized projection/residual/truncation coordinates incrementally:
// moving coefficient k across touches only {k} and its sigma block.
TrialWorst scan_one(const BasisContext<double>& ctx, const std::vector<std::pair<Index, double>>& raw) {
  const auto& t = ctx.tables();
  auto a = CoeffVector<double>::from_entries({raw.begin(), raw.end()});
  TrialWorst worst;
  if (a.empty()) return worst;

  auto order = greedy_order(a);
  double p = ctx.p();
  PowTracker residual{.coords = {}, .pow_sum = 0.0, .p = p};
  PowTracker projection{.coords = {}, .pow_sum = 0.0, .p = p};
  PowTracker flat{.coords = {}, .pow_sum = 0.0, .p = p}; // sum of sign(a_k) x_k over the greedy set

  for (const auto& [j, v] : synthesize(ctx, a).entries()) residual.bump(j, v);
  double input_pow = residual.pow_sum;
  if (input_pow <= 0.0) return worst;
  double inv_norm = 1.0 / std::pow(input_pow, 1.0 / p);

  for (size_t m = 1; m <= order.size(); ++m) {
    Index k = order[m - 1];
    double ak = a.at(k);
    double w = ctx.weight(k);
    Index lo = t.sigma(k), hi = t.sigma(k + 1);
    double sgn = ak >= 0 ? 1.0 : -1.0;

    residual.bump(k, -ak);
    projection.bump(k, ak);
    flat.bump(k, sgn);
    for (Index j = lo; j < hi; ++j) {
      residual.bump(j, ak * w);
      projection.bump(j, -ak * w);
      flat.bump(j, -sgn * w);
    }

    double level = std::fabs(ak); // m-th greedy magnitude
    worst.residual = std::max(worst.residual, std::pow(residual.pow_sum, 1.0 / p) * inv_norm);
    worst.projection = std::max(worst.projection, std::pow(projection.pow_sum, 1.0 / p) * inv_norm);
    worst.truncation = std::max(worst.truncation, level * std::pow(flat.pow_sum, 1.0 / p) * inv_norm);
  }
  return worst;
}

} // namespace

QgScanResult quasi_greedy_scan(const BasisContext<double>& ctx, const ScanConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("quasi_greedy_scan requires trials >= 1");
  std::vector<TrialWorst> per_trial(cfg.trials);
  parallel_for(cfg.trials, [&](size_t i) {
    TrialRng rng(cfg.seed, i);
    per_trial[i] = scan_one(ctx, random_coefficients(rng, cfg.max_support, cfg.max_support_size));
  });

  QgScanResult out;
  for (size_t i = 0; i < per_trial.size(); ++i) {
    if (per_trial[i].residual > out.max_residual_ratio) {
      out.max_residual_ratio = per_trial[i].residual;
      out.residual_witness_trial = i;
    }
    if (per_trial[i].projection > out.max_projection_ratio) {
      out.max_projection_ratio = per_trial[i].projection;
      out.projection_witness_trial = i;
    }
    out.max_truncation_ratio = std::max(out.max_truncation_ratio, per_trial[i].truncation);
  }
  std::ostringstream os;
  os << "seed=" << cfg.seed << " residual@trial=" << out.residual_witness_trial
     << " projection@trial=" << out.projection_witness_trial;
  out.witness = os.str();
  return out;
}

std::vector<DemocracySample> democracy_scan(const BasisContext<double>& ctx, std::span<const Index> m_values,
                                            size_t trials_per_m, std::uint64_t seed) {
  double p = ctx.p();
  std::vector<DemocracySample> samples(m_values.size());
  parallel_for(m_values.size(), [&](size_t mi) {
    Index m = m_values[mi];
    DemocracySample s;
    s.m = m;
    s.lower_bound = democracy_lower(p, static_cast<double>(m));
    s.upper_bound = democracy_upper(p, static_cast<double>(m));
    s.min_norm = std::numeric_limits<double>::infinity();
    s.max_norm = 0.0;
    Index range = 4 * m; // leaves room for nested sigma blocks inside A
    for (size_t trial = 0; trial < trials_per_m; ++trial) {
      TrialRng rng(seed ^ (0x51ed2700ull * (mi + 1)), trial);
      auto A = random_subset(rng, range, static_cast<size_t>(m));
      std::vector<CoeffVector<double>::Entry> entries;
      entries.reserve(A.size());
      for (Index j : A) entries.push_back({j, static_cast<double>(rng.sign())});
      auto norm = synthesize(ctx, CoeffVector<double>::from_entries(std::move(entries))).p_norm(p);
      s.min_norm = std::min(s.min_norm, norm);
      s.max_norm = std::max(s.max_norm, norm);
    }
    constexpr double slack = 1e-9;
    s.pass = s.min_norm >= s.lower_bound * (1.0 - slack) && s.max_norm <= s.upper_bound * (1.0 + slack);
    samples[mi] = s;
  });
  return samples;
}

SuccResult succ_scan(const BasisContext<double>& ctx, const ScanConfig& cfg) {
  double p = ctx.p();
  const double eps = 1e-6;
  std::vector<std::pair<double, double>> per_trial(cfg.trials); // (indicator ratio, truncation ratio)
  parallel_for(cfg.trials, [&](size_t i) {
    TrialRng rng(cfg.seed ^ 0xabcdefull, i);
    size_t a_size = 2 + static_cast<size_t>(rng.next_u64() % 62);
    auto A = random_subset(rng, 256, a_size);
    size_t b_size = 1 + static_cast<size_t>(rng.next_u64() % a_size);
    std::vector<Index> B(A);
    // deterministic Fisher-Yates prefix for the nested subset
    for (size_t j = 0; j + 1 < B.size(); ++j) {
      size_t swap_at = j + static_cast<size_t>(rng.next_u64() % (B.size() - j));
      std::swap(B[j], B[swap_at]);
    }
    B.resize(b_size);
    std::sort(B.begin(), B.end());

    std::vector<CoeffVector<double>::Entry> a_entries, f_entries, b_entries;
    for (Index j : A) {
      double g = static_cast<double>(rng.sign());
      bool in_b = std::binary_search(B.begin(), B.end(), j);
      a_entries.push_back({j, g});
      f_entries.push_back({j, in_b ? g * (1.0 + eps) : g});
      if (in_b) b_entries.push_back({j, g});
    }
    auto one_a = CoeffVector<double>::from_entries(std::move(a_entries));
    auto f = CoeffVector<double>::from_entries(std::move(f_entries));
    auto one_b = CoeffVector<double>::from_entries(std::move(b_entries));

    auto truncated = restricted_truncation(ctx, f, b_size); // equals (1+eps) * 1_{g,B}
    double norm_a = synthesize(ctx, one_a).p_norm(p);
    double norm_b = synthesize(ctx, one_b).p_norm(p);
    double norm_f = synthesize(ctx, f).p_norm(p);
    double norm_u = synthesize(ctx, truncated).p_norm(p);
    per_trial[i] = {norm_b / norm_a, norm_u / norm_f};
  });

  SuccResult out;
  for (const auto& [ratio, trunc] : per_trial) {
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    out.bound = std::max(out.bound, trunc);
  }
  out.pass = out.worst_ratio <= out.bound * (1.0 + 1e-9);
  return out;
}

} // namespace lindy
