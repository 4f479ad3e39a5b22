// The cross-module property battery behind the `verify` subcommand: every
// invariant suite at a configurable scale, reported as rows. Nonzero exit is
// decided by the caller from the pass flags.
#pragma once

#include <ostream>

#include "lindy/indexing.hpp"
#include "lindy/report.hpp"

namespace lindy {

struct VerifyConfig {
  double p = 1.0;
  DeltaSpec delta = DeltaSpec::constant(2);
  bool exact = false; // also run the rational-mode exact suites (needs 1/p integral)
  std::size_t trials = 2000;
  std::uint64_t seed = 7;
  Index basis_range = 128;  // biorthogonality and column checks go this far
  std::vector<Index> m_grid; // conditionality grid; default powers of two
};

// Runs every suite; failing checks append rows with pass=false and print the
// witnessing input to log.
std::vector<Row> run_verify(const VerifyConfig& cfg, std::ostream& log);

} // namespace lindy
