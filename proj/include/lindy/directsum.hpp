// The p-direct sum of finite sections of the basis: block indexing, norms,
// greedy projections over global indices, and conditionality reports obtained
// by embedding the u/v witness into the widest applicable block.
#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "lindy/conditionality.hpp"
#include "lindy/greedy.hpp"

namespace lindy {

class BlockLayout {
public:
  // Grammar: geom:<r> (N_k = ceil(r^k)) | linear (N_k = k) | list:<n1,n2,...>
  static BlockLayout parse(const std::string& eta, size_t block_count);
  static BlockLayout from_sizes(std::vector<Index> sizes);

  size_t block_count() const { return sizes_.size(); }
  Index block_size(size_t k) const { return sizes_.at(k); }
  Index offset(size_t k) const { return offsets_.at(k); } // global indices before block k
  Index total() const { return offsets_.back(); }

  // global index (1-based) <-> (block, local index); round trip is identity
  std::pair<size_t, Index> locate(Index global) const;
  Index global_index(size_t block, Index local) const;

private:
  std::vector<Index> sizes_;
  std::vector<Index> offsets_; // size block_count()+1, offsets_[0] = 0
};

// Splits a global coefficient vector into per-block coefficient vectors;
// throws on coefficients outside every block.
std::vector<CoeffVector<double>> split_blocks(const BlockLayout& layout, const CoeffVector<double>& coeffs);

// (sum_k ||block_k||^p)^{1/p} with block norms through the basis synthesis.
double block_power_sum(const BlockLayout& layout, const BasisContext<double>& ctx,
                       const CoeffVector<double>& coeffs);
double block_norm(const BlockLayout& layout, const BasisContext<double>& ctx, const CoeffVector<double>& coeffs);

// Greedy projection over global indices; magnitude order with
// lowest-global-index ties, norms via block_power_sum.
GreedyOutcome<double> directsum_greedy(const BlockLayout& layout, const BasisContext<double>& ctx,
                                       const CoeffVector<double>& coeffs, size_t m);

// Conditionality interval per m: lower bound from the u/v witness embedded in
// the block maximizing min(m - offset, N_k); upper bound from the blockwise
// column argument at size min(m, max N_k).
std::vector<BoundReport> directsum_conditionality(const BlockLayout& layout, const BasisContext<double>& ctx,
                                                  std::span<const Index> m_grid, Index k_max);

} // namespace lindy
