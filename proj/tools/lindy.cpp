// lindy: experiments on Lindenstrauss-type bases of the sequence spaces
// ell_p, 0 < p <= 1 - greedy algorithm behavior, democracy, conditionality
// constants, the step-function quotient, and delta-sequence synthesis.
//
// Exit codes: 0 success, 1 invariant violation, 2 bad configuration,
// 3 capacity exceeded.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lindy/conditionality.hpp"
#include "lindy/config.hpp"
#include "lindy/directsum.hpp"
#include "lindy/dual.hpp"
#include "lindy/greedy.hpp"
#include "lindy/quotient.hpp"
#include "lindy/random.hpp"
#include "lindy/report.hpp"
#include "lindy/synthesis.hpp"
#include "lindy/verify.hpp"

namespace {

using namespace lindy;

void emit(const ExperimentConfig& cfg, std::vector<Row> rows) {
  sort_rows(rows);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
    out = &file;
  }
  if (cfg.format == "json")
    write_json(*out, rows);
  else
    write_csv(*out, rows);
  if (!all_pass(rows)) throw CheckFailure("one or more report rows failed");
}

std::vector<Index> grid_or_default(const ExperimentConfig& cfg, Index limit) {
  return cfg.m_grid.empty() ? default_m_grid(limit) : cfg.m_grid;
}

BasisContext<double> make_context(const ExperimentConfig& cfg, Index max_k) {
  auto tables = make_tables_for_basis(DeltaSpec::parse(cfg.delta_text), max_k);
  return BasisContext<double>(tables, PContext::make(cfg.p));
}

int run_indexing(const ExperimentConfig& cfg) {
  auto grid = grid_or_default(cfg, 4096);
  auto tables = make_tables_for_basis(DeltaSpec::parse(cfg.delta_text), grid.back() + 2);
  std::vector<Row> rows;
  for (Index m : grid) {
    double sig = static_cast<double>(tables->sigma(m));
    rows.push_back({"sigma", m, sig, sig, sig, "cumulative-map", true});
    double g = static_cast<double>(tables->gamma(m));
    rows.push_back({"gamma", m, g, g, g, "level-counter", true});
    if (2 * m <= tables->gamma_horizon()) {
      Index g2 = tables->gamma(2 * m);
      bool ok = g2 <= tables->gamma(m) + 1 && tables->gamma(m) + 1 <= 2 * std::max<Index>(tables->gamma(m), 1);
      rows.push_back({"gamma-doubling", m, static_cast<double>(g2), static_cast<double>(tables->gamma(m) + 1),
                      2.0 * static_cast<double>(tables->gamma(m)), "gamma-doubling", ok});
    }
  }
  for (Index n = 0; n <= tables->max_level(); ++n) {
    double v = static_cast<double>(tables->lambda_at(n));
    rows.push_back({"lambda", n, v, v, v, "sigma-iterates", true});
  }
  emit(cfg, std::move(rows));
  return 0;
}

int run_synthesize(const std::string& phi, Index len, const std::string& out_file) {
  auto spec = ConcaveSpec::parse(phi, len);
  auto result = delta_from_concave(spec);
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    if (!out) throw ConfigError("cannot open '" + out_file + "'");
    for (Index n = 1; n <= result.diagnostics.produced_terms; ++n) out << result.delta.term(n) << "\n";
  }
  nlohmann::json diag{{"phi", spec.describe()},
                      {"offset_a", result.diagnostics.offset_a},
                      {"offset_b", result.diagnostics.offset_b},
                      {"produced_terms", result.diagnostics.produced_terms},
                      {"truncated", result.diagnostics.truncated},
                      {"gamma_band", {result.diagnostics.band_lo, result.diagnostics.band_hi}},
                      {"milestones", result.diagnostics.milestones.values},
                      {"note", result.diagnostics.note}};
  std::cout << diag.dump(2) << "\n";
  return 0;
}

int run_basis(const ExperimentConfig& cfg, const std::vector<Index>& ks) {
  Index max_k = 2;
  for (Index k : ks) max_k = std::max(max_k, k + 1);
  auto ctx = make_context(cfg, max_k);
  for (Index k : ks) {
    std::cout << "# x_" << k << "\n";
    write_lines(std::cout, basis_vector(ctx, k));
    std::cout << "# x*_" << k << "\n";
    write_lines(std::cout, dual_vector(ctx, k));
  }
  return 0;
}

int run_greedy(const ExperimentConfig& cfg, Index max_support) {
  auto ctx = make_context(cfg, max_support + 1);
  ScanConfig scan{cfg.trials, max_support, cfg.seed, 256};
  auto qg = quasi_greedy_scan(ctx, scan);
  double rb = qg_residual_bound(cfg.p), pb = qg_projection_bound(cfg.p);
  std::vector<Row> rows;
  rows.push_back({"qg-residual-ratio", cfg.trials, qg.max_residual_ratio, rb, rb, "greedy-residual-bound",
                  qg.max_residual_ratio <= rb * (1 + 1e-9)});
  rows.push_back({"qg-projection-ratio", cfg.trials, qg.max_projection_ratio, pb, pb, "greedy-projection-bound",
                  qg.max_projection_ratio <= pb * (1 + 1e-9)});
  rows.push_back({"truncation-ratio", cfg.trials, qg.max_truncation_ratio, qg.max_truncation_ratio,
                  qg.max_truncation_ratio, "truncation-witness", true});
  auto ms = grid_or_default(cfg, 1024);
  auto demo = democracy_scan(ctx, ms, std::max<std::size_t>(cfg.trials / ms.size(), 32), cfg.seed);
  for (const auto& s : demo)
    rows.push_back({"democracy", s.m, s.min_norm, s.max_norm, s.upper_bound, "superdemocracy-bounds", s.pass});
  emit(cfg, std::move(rows));
  return 0;
}

int run_constants(const ExperimentConfig& cfg, Index k_max) {
  auto grid = grid_or_default(cfg, 4096);
  auto ctx = make_context(cfg, grid.back() + 2);
  if (k_max == 0) k_max = grid.back();
  auto points = envelope_check(ctx, grid, k_max);
  std::vector<Row> rows;
  for (const auto& pt : points) {
    double ref = pt.lower_over_gamma ? pt.lower / *pt.lower_over_gamma : 0.0;
    rows.push_back({"conditionality", pt.m, pt.lower, pt.upper, ref, "uv-witness-and-column-bound",
                    pt.lower <= pt.upper * (1 + 1e-9)});
    rows.push_back({"conditionality-over-log", pt.m, pt.lower_over_log, pt.upper_over_log,
                    std::pow(std::log(static_cast<double>(pt.m)), 1.0 / cfg.p), "log-envelope", true});
  }
  emit(cfg, std::move(rows));
  return 0;
}

int run_quotient(const ExperimentConfig& cfg, Index range, Index unit) {
  auto ctx = make_context(cfg, std::max(range, unit) + 1);
  const auto& t = ctx.tables();
  if (unit > 0) { // print the image of e_unit as step-function CSV and stop
    write_csv(std::cout, q_map(ctx, SparseVector<double>::unit(unit)));
    return 0;
  }
  std::vector<Row> rows;
  bool kernel_ok = true;
  for (Index k = 1; k <= range; ++k) {
    auto f = q_map(ctx, basis_vector(ctx, k));
    for (double v : f.values)
      if (std::fabs(v) > 1e-9) kernel_ok = false;
  }
  rows.push_back({"quotient-kernel", range, kernel_ok ? 1.0 : 0.0, 1, 1, "basis-vectors-vanish", kernel_ok});
  bool contraction_ok = true;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    TrialRng rng(cfg.seed, i);
    auto entries = random_coefficients(rng, range, 32);
    auto v = SparseVector<double>::from_entries({entries.begin(), entries.end()});
    if (step_power_sum(q_map(ctx, v), cfg.p) > v.power_sum(cfg.p) * (1 + 1e-9)) contraction_ok = false;
  }
  rows.push_back({"quotient-contraction", cfg.trials, contraction_ok ? 1.0 : 0.0, 1, 1,
                  "image-power-sum-bounded", contraction_ok});
  for (Index n = 0; n <= std::min<Index>(t.max_level() - 1, 8); ++n) {
    IndexInterval level = t.block_interval(1, n);
    if (level.hi > range + 1) break;
    double width = static_cast<double>(level.size());
    rows.push_back({"quotient-level-width", n, width, width, std::pow(2.0, static_cast<double>(n)),
                    "partition-refinement", true});
  }
  emit(cfg, std::move(rows));
  return 0;
}

int run_directsum(const ExperimentConfig& cfg, std::size_t blocks) {
  auto layout = BlockLayout::parse(cfg.eta_text.value_or("geom:2"), blocks);
  auto grid = grid_or_default(cfg, 1024);
  Index max_block = 0;
  for (std::size_t k = 0; k < layout.block_count(); ++k) max_block = std::max(max_block, layout.block_size(k));
  auto ctx = make_context(cfg, std::max<Index>(max_block, grid.back()) + 2);
  std::vector<Row> rows;
  auto reports = directsum_conditionality(layout, ctx, grid, std::min<Index>(grid.back(), 256));
  for (const auto& r : reports) {
    rows.push_back({"directsum-conditionality", r.m, r.witnessed_lower, r.certified_upper, r.reference,
                    "blockwise-growth-ratio", r.witnessed_lower <= r.certified_upper * (1 + 1e-9)});
  }
  bool sandwich_ok = true;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    TrialRng rng(cfg.seed, i);
    auto entries = random_coefficients(rng, std::min<Index>(layout.total(), 512), 64);
    auto a = CoeffVector<double>::from_entries({entries.begin(), entries.end()});
    if (a.empty()) continue;
    double plain = a.power_sum(cfg.p), block = block_power_sum(layout, ctx, a);
    if (!(plain <= block * (1 + 1e-9) && block <= 2 * plain * (1 + 1e-9))) sandwich_ok = false;
  }
  rows.push_back({"directsum-sandwich", cfg.trials, sandwich_ok ? 1.0 : 0.0, 1, 1, "block-norm-equivalence",
                  sandwich_ok});
  emit(cfg, std::move(rows));
  return 0;
}

int run_dual(const ExperimentConfig& cfg) {
  auto grid = grid_or_default(cfg, 4096);
  auto ctx = make_context(cfg, grid.back() + 1);
  const auto& t = ctx.tables();
  std::vector<Row> rows;
  SparseVector<double> head_sum;
  SparseVector<double> alt_sum;
  Index covered = 0;
  for (Index m : grid) {
    for (Index j = covered + 1; j <= m; ++j) {
      auto dv = dual_vector(ctx, j);
      head_sum = head_sum.plus(dv);
      alt_sum = alt_sum.plus(j % 2 == 0 ? dv : dv.scaled(-1.0));
    }
    covered = m;
    double gamma_m = static_cast<double>(t.gamma(m));
    double head = head_sum.at(1);
    rows.push_back({"dual-head-column", m, gamma_m, head, gamma_m, "head-column-exceeds-gamma", head > gamma_m});
    if (t.nondecreasing()) { // the sup-norm bounds need width-monotone levels
      double alt = alt_sum.sup_norm();
      rows.push_back({"dual-alternating", m, alt, 2.0, 2.0, "alternating-sum-bound", alt <= 2.0 + 1e-9});
      double phi = head_sum.sup_norm();
      rows.push_back({"dual-phi-upper", m, phi, 1.0 + gamma_m, 1.0 + gamma_m, "sign-sum-sup-bound",
                      phi <= 1.0 + gamma_m + 1e-9});
    }
    rows.push_back({"dual-lebesgue-upper", m, 0.0, 4.0 + 3.0 * gamma_m, gamma_m, "external-lebesgue-arithmetic",
                    true});
    rows.push_back({"dual-qg-lower", m, gamma_m / 8.0, gamma_m, gamma_m, "qg-lebesgue-floor", true});
  }
  emit(cfg, std::move(rows));
  return 0;
}

int run_verify_cmd(const ExperimentConfig& cfg, Index basis_range) {
  VerifyConfig vc;
  vc.p = cfg.p;
  vc.delta = DeltaSpec::parse(cfg.delta_text);
  vc.exact = cfg.exact;
  vc.trials = cfg.trials;
  vc.seed = cfg.seed;
  vc.basis_range = basis_range;
  vc.m_grid = cfg.m_grid;
  auto rows = run_verify(vc, std::cerr);
  emit(cfg, std::move(rows));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindenstrauss-type bases of ell_p: greedy algorithm and conditionality experiments"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  ExperimentConfig cfg;
  std::string m_text;
  app.add_option("--p", cfg.p, "exponent p in (0,1]")->capture_default_str();
  app.add_option("--delta", cfg.delta_text, "delta rule: const:<c> | list:...[;tail=<c>] | pow:<a> | table:<file>")
      ->capture_default_str();
  std::string eta_text;
  app.add_option("--eta", eta_text, "block sizes: geom:<r> | linear | list:...");
  app.add_option("--m", m_text, "m grid, e.g. 2,4,...,4096");
  app.add_option("--trials", cfg.trials, "randomized trials")->capture_default_str();
  app.add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  app.add_flag("--exact", cfg.exact, "run exact rational checks (needs 1/p integral)");
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--out", cfg.out_path, "output file (default stdout)");

  auto* indexing_cmd = app.add_subcommand("indexing", "sigma/lambda/gamma tables and doubling checks");
  auto* synth_cmd = app.add_subcommand("synthesize", "build a delta table with prescribed growth");
  std::string phi = "pow:0.5";
  Index len = 16;
  std::string delta_out;
  synth_cmd->add_option("--phi", phi, "target family: pow:<c> or log1p")->capture_default_str();
  synth_cmd->add_option("--len", len, "requested delta terms")->capture_default_str();
  synth_cmd->add_option("--out", delta_out, "delta table file to write");

  auto* basis_cmd = app.add_subcommand("basis", "print basis and dual vectors");
  std::vector<Index> ks{1, 2, 3};
  basis_cmd->add_option("--k", ks, "indices to print");

  auto* greedy_cmd = app.add_subcommand("greedy", "quasi-greedy and democracy scans");
  Index max_support = 2048;
  greedy_cmd->add_option("--max-support", max_support, "largest coefficient index sampled")->capture_default_str();

  auto* constants_cmd = app.add_subcommand("constants", "conditionality constant intervals");
  Index k_max = 0;
  constants_cmd->add_option("--k-max", k_max, "column scan range (default: grid max)");

  auto* quotient_cmd = app.add_subcommand("quotient", "kernel / contraction checks of the step-function map");
  Index q_range = 128;
  Index q_unit = 0;
  quotient_cmd->add_option("--range", q_range, "basis indices checked")->capture_default_str();
  quotient_cmd->add_option("--unit", q_unit, "print the step-function image of this unit vector as CSV");

  auto* directsum_cmd = app.add_subcommand("directsum", "block direct-sum experiments");
  std::size_t blocks = 16;
  directsum_cmd->add_option("--blocks", blocks, "number of blocks")->capture_default_str();

  auto* dual_cmd = app.add_subcommand("dual", "dual-basis sup-norm quantities");

  auto* verify_cmd = app.add_subcommand("verify", "run every module's invariant battery");
  Index basis_range = 128;
  verify_cmd->add_option("--range", basis_range, "biorthogonality/column range")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!m_text.empty()) cfg.m_grid = parse_m_grid(m_text);
    if (!eta_text.empty()) cfg.eta_text = eta_text;
    cfg.validate();
    if (indexing_cmd->parsed()) return run_indexing(cfg);
    if (synth_cmd->parsed()) return run_synthesize(phi, len, delta_out);
    if (basis_cmd->parsed()) return run_basis(cfg, ks);
    if (greedy_cmd->parsed()) return run_greedy(cfg, max_support);
    if (constants_cmd->parsed()) return run_constants(cfg, k_max);
    if (quotient_cmd->parsed()) return run_quotient(cfg, q_range, q_unit);
    if (directsum_cmd->parsed()) return run_directsum(cfg, blocks);
    if (dual_cmd->parsed()) return run_dual(cfg);
    if (verify_cmd->parsed()) return run_verify_cmd(cfg, basis_range);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
