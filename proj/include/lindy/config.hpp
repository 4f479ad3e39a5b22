// Shared experiment configuration for the CLI subcommands.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindy/indexing.hpp"

namespace lindy {

struct ExperimentConfig {
  double p = 1.0;
  std::string delta_text = "const:2";
  std::optional<std::string> eta_text;
  std::vector<Index> m_grid;
  std::size_t trials = 10000;
  std::uint64_t seed = 7;
  bool exact = false;
  std::string format = "csv"; // csv | json
  std::string out_path;       // empty = stdout

  void validate() const;
};

// Grid grammar: comma list of integers; "a..b" expands to the inclusive
// range; a "..." token continues the progression of its two neighbors
// (geometric when the ratio is integral, else arithmetic) up to the value
// after it. Example: "2,4,...,4096".
std::vector<Index> parse_m_grid(const std::string& text);

// Default grid: powers of two from 2 to limit.
std::vector<Index> default_m_grid(Index limit);

} // namespace lindy
