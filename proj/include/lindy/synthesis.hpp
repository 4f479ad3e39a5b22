// Builds delta sequences with prescribed growth of the level counter Gamma:
// directly from a milestone list Lambda(n) = M_n, or from a concave target
// Gamma(m) ~ phi(log m) via the milestone pipeline.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lindy/indexing.hpp"

namespace lindy {

struct MilestoneSequence {
  std::vector<Index> values; // M_0, M_1, ..., M_L
};

struct MilestoneValidation {
  bool ok = false;
  std::optional<size_t> first_violation; // index n of the offending entry/condition
  std::string detail;
};

// Requires M_0 = 1, M_1 = 2, M_2 >= 4, strict increase, and the rounded
// difference-ratio chain ceil(A_n) <= floor(A_{n+1}).
MilestoneValidation validate_milestones(const MilestoneSequence& m);

// The convex interpolant h through the milestones; delta = (h(n+1) - h(n))
// restricted to the first max_terms integers. Rebuilding the tables from the
// result reproduces Lambda(n) = M_n on the covered prefix.
DeltaSpec delta_from_milestones(const MilestoneSequence& m, Index max_terms);

struct ConcaveSpec {
  enum class Family { Power, Log1p };
  Family family = Family::Power;
  double exponent = 1.0; // phi(x) = x^c for Power, 0 < c <= 1
  Index target_length = 16;

  static ConcaveSpec parse(const std::string& phi, Index target_length);
  double phi(double x) const;
  double psi(double y) const; // inverse of phi, by bisection
  std::string describe() const;
};

struct SynthesisDiagnostics {
  MilestoneSequence milestones;
  Index offset_a = 0;
  Index offset_b = 0;
  bool truncated = false; // target length reduced to fit the index type
  Index produced_terms = 0;
  // measured band of Gamma(m)/phi(log m) over a geometric grid in [4, M_{L-1})
  double band_lo = 0.0;
  double band_hi = 0.0;
  std::string note;
};

struct SynthesisResult {
  DeltaSpec delta;
  SynthesisDiagnostics diagnostics;
};

// The concave pipeline: M(x) = floor(e^{psi(x)}), offsets a and b chosen so
// the finitely many ratio conditions hold, milestones 2^n spliced below the
// crossover. phi(x) ~ x falls back to the constant-2 sequence.
SynthesisResult delta_from_concave(const ConcaveSpec& spec);

// Gamma read directly off a milestone list (left inverse), usable beyond the
// materialized delta table.
Index milestone_gamma(const MilestoneSequence& m, Index value);

} // namespace lindy
