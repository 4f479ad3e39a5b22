#include "lindy/directsum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lindy {

BlockLayout BlockLayout::from_sizes(std::vector<Index> sizes) {
  if (sizes.empty()) throw ConfigError("block layout needs at least one block");
  for (Index n : sizes)
    if (n < 1) throw ConfigError("block sizes must be >= 1");
  BlockLayout layout;
  layout.sizes_ = std::move(sizes);
  layout.offsets_.assign(1, 0);
  for (Index n : layout.sizes_) layout.offsets_.push_back(layout.offsets_.back() + n);
  return layout;
}

BlockLayout BlockLayout::parse(const std::string& eta, size_t block_count) {
  if (block_count < 1) throw ConfigError("eta needs at least one block");
  if (eta == "linear") {
    std::vector<Index> sizes(block_count);
    for (size_t k = 0; k < block_count; ++k) sizes[k] = static_cast<Index>(k + 1);
    return from_sizes(std::move(sizes));
  }
  if (eta.rfind("geom:", 0) == 0) {
    double r = 0.0;
    try {
      r = std::stod(eta.substr(5));
    } catch (const std::exception&) {
      throw ConfigError("eta geom: cannot parse ratio '" + eta + "'");
    }
    if (!(r > 1.0)) throw ConfigError("eta geom ratio must exceed 1");
    std::vector<Index> sizes(block_count);
    for (size_t k = 0; k < block_count; ++k) {
      double v = std::ceil(std::pow(r, static_cast<double>(k + 1)));
      if (v > 1e18) throw CapacityError("eta geom block size overflows");
      sizes[k] = static_cast<Index>(v);
    }
    return from_sizes(std::move(sizes));
  }
  if (eta.rfind("list:", 0) == 0) {
    std::vector<Index> sizes;
    std::stringstream ss(eta.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(static_cast<Index>(std::stoull(item)));
    if (sizes.size() > block_count) sizes.resize(block_count);
    return from_sizes(std::move(sizes));
  }
  throw ConfigError("unknown eta rule '" + eta + "' (expected geom:<r>, linear, list:...)");
}

std::pair<size_t, Index> BlockLayout::locate(Index global) const {
  if (global < 1 || global > total()) throw ConfigError("global index out of layout range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global - 1);
  size_t block = static_cast<size_t>(it - offsets_.begin()) - 1;
  return {block, global - offsets_[block]};
}

Index BlockLayout::global_index(size_t block, Index local) const {
  if (block >= sizes_.size() || local < 1 || local > sizes_[block])
    throw ConfigError("block-local index out of range");
  return offsets_[block] + local;
}

std::vector<CoeffVector<double>> split_blocks(const BlockLayout& layout, const CoeffVector<double>& coeffs) {
  std::vector<std::vector<CoeffVector<double>::Entry>> parts(layout.block_count());
  for (const auto& [global, value] : coeffs.entries()) {
    auto [block, local] = layout.locate(global);
    parts[block].push_back({local, value});
  }
  std::vector<CoeffVector<double>> out;
  out.reserve(parts.size());
  for (auto& part : parts) out.push_back(CoeffVector<double>::from_entries(std::move(part)));
  return out;
}

double block_power_sum(const BlockLayout& layout, const BasisContext<double>& ctx,
                       const CoeffVector<double>& coeffs) {
  double acc = 0.0;
  for (const auto& part : split_blocks(layout, coeffs)) {
    if (part.empty()) continue;
    acc += synthesize(ctx, part).power_sum(ctx.p());
  }
  return acc;
}

double block_norm(const BlockLayout& layout, const BasisContext<double>& ctx, const CoeffVector<double>& coeffs) {
  return std::pow(block_power_sum(layout, ctx, coeffs), 1.0 / ctx.p());
}

GreedyOutcome<double> directsum_greedy(const BlockLayout& layout, const BasisContext<double>& ctx,
                                       const CoeffVector<double>& coeffs, size_t m) {
  auto order = greedy_order(coeffs);
  if (m > order.size()) m = order.size();
  std::vector<Index> set(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(set.begin(), set.end());
  GreedyOutcome<double> out;
  out.greedy_set = set;
  out.projection = coeffs.restricted(std::span<const Index>(set));
  out.residual = coeffs.minus(out.projection);
  out.input_pow = block_power_sum(layout, ctx, coeffs);
  out.projection_pow = block_power_sum(layout, ctx, out.projection);
  out.residual_pow = block_power_sum(layout, ctx, out.residual);
  return out;
}

std::vector<BoundReport> directsum_conditionality(const BlockLayout& layout, const BasisContext<double>& ctx,
                                                  std::span<const Index> m_grid, Index k_max) {
  Index max_block = 0;
  for (size_t k = 0; k < layout.block_count(); ++k) max_block = std::max(max_block, layout.block_size(k));
  std::vector<BoundReport> reports;
  for (Index m : m_grid) {
    // widest u/v recursion that stays inside one block and the first m vectors
    Index best_w = 0;
    size_t best_block = 0;
    for (size_t k = 0; k < layout.block_count(); ++k) {
      if (layout.offset(k) >= m) break;
      Index w = std::min<Index>(m - layout.offset(k), layout.block_size(k));
      if (w > best_w) {
        best_w = w;
        best_block = k;
      }
    }
    BoundReport report;
    report.m = m;
    if (best_w >= 1) {
      auto uv = uv_witness(ctx, best_w);
      report.witnessed_lower = uv.lower_estimate;
      std::ostringstream os;
      os << "u/v witness of size " << best_w << " in block " << best_block;
      report.witness = os.str();
    }
    report.certified_upper = km_upper(ctx, std::min<Index>(m, max_block), k_max);
    report.reference = std::pow(1.0 + static_cast<double>(ctx.tables().gamma(m)), 1.0 / ctx.p());
    reports.push_back(report);
  }
  return reports;
}

} // namespace lindy
