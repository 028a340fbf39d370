#ifndef GEXPECT_CERTIFICATION_HPP
#define GEXPECT_CERTIFICATION_HPP

#include <cstdint>
#include <vector>

#include "gexpect/propositions.hpp"
#include "gexpect/rng.hpp"

namespace gexpect {

struct SweepRow {
  BoundId id;
  std::uint64_t family_hash;
  int n;
  double x;         // threshold / scale parameter of the check
  double bound;     // closed-form bound value
  double capacity;  // exact quantity being bounded (capacity or expectation)
  double slack;     // signed margin; >= -tolerance required
  bool ok;
};

struct SweepConfig {
  std::uint64_t seed = 0xC0FFEE;
  int config_count = 200;
  int min_n = 2;
  int max_n = 8;
  double tolerance = 1e-10;
  std::size_t state_budget = kDefaultStateBudget;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int violations = 0;
  double min_slack = 0.0;
};

// Random family for certification: atoms drawn from {+-2, +-1, +-0.5, 0}
// with random probabilities, 2-3 laws.
MeasureFamily random_certification_family(RandomStream& rs);

// Certifies the pointwise bounds (Bernstein variants 1-3, both one-step
// expansion forms, the heterogeneous second-term bound) against exact
// adversarial capacities over randomized configurations.
SweepResult run_certification_sweep(const SweepConfig& cfg);

// Single classical law: the variant-1 bound against the exact binomial tail
// (combinatorial oracle) and the adversarial DP value of the same event.
struct BinomialCheck {
  int n;
  double x;
  double exact_tail;  // binomial enumeration
  double dp_tail;     // adversarial DP on the one-law family
  double bound;
  bool ok;  // dp == exact (1e-12) and exact <= bound
};

std::vector<BinomialCheck> classical_bernstein_battery(int max_n = 12);

}  // namespace gexpect

#endif  // GEXPECT_CERTIFICATION_HPP
