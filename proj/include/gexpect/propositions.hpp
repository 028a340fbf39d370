#ifndef GEXPECT_PROPOSITIONS_HPP
#define GEXPECT_PROPOSITIONS_HPP

#include <map>
#include <string>

#include "gexpect/adversarial.hpp"
#include "gexpect/moment_profile.hpp"

namespace gexpect {

// Closed-form bound identifiers. The BIneq / lemma one-step forms carry
// explicit constants and are certified pointwise against exact capacities;
// the proposition forms contain asymptotic envelopes (their o/O terms are a
// caller-supplied constant "C") and are only trend-tested.
enum class BoundId {
  BIneq1,
  BIneq2,
  BIneq3,
  Prop1,
  Prop2,
  Prop3,
  Prop4,
  Prop6_1,
  Prop6_2,
  Prop6_3,
  MomentG1Upper,  // truncated one-step expansion, explicit constant
  MomentG1Lower,
  Lem6_1Upper,    // raw one-step expansion, explicit constant
  Lem6_1Lower,
  MomentG2Upper,  // n-step exponential-moment envelope
  Lem6_2a,
  Lem6_2b,
  Lem6_2c,
};

std::string bound_id_name(BoundId id);

struct PropositionValue {
  double log_bound;      // log of the dominant closed form
  bool asymptotic_only;  // contains an o/O envelope; not pointwise-certifiable
  std::string note;
};

// Face-value evaluation of the proposition bounds; params keyed by name
// ("x", "delta", "beta", "q", "delta_nx", "C", "t", "A0", "lambda", "theta").
// Out-of-range parameters raise DomainError.
PropositionValue proposition_bound(BoundId id,
                                   const std::map<std::string, double>& params);

// Second-term tail bound of the large-V^2 split in the heterogeneous case:
// with t = 5 and A0 = 120 the count event {sum I{b X_i > A0} >= x^2/4} has
// capacity at most exp{-t x^2/4 + 4 e^t x^2 / A0^2} <= exp{-x^2} for x >= 2.
double prop61_second_term_log_bound(double x, double t = 5.0, double a0 = 120.0);

// Exact capacity of that count event for an iid array of n copies of fam,
// with b = x / b_bar. Used to certify the bound above.
double prop61_second_term_exact(const MeasureFamily& fam, int n, double x,
                                double a0 = 120.0,
                                std::size_t state_budget = kDefaultStateBudget);

// Finite-n certified upper bound for V(S_n >= x V_n), assembled from the
// three-way split {V^2 large} + {V^2 middle} + {V^2 small}. Every piece is a
// valid inequality at the given n (Markov/Chebyshev steps with exact
// exponential moments via state DP), so exact-DP capacities never exceed it.
struct MdUpperBound {
  double log_total;        // log of min(1, piece sum)
  double log_large_trunc;  // truncated-sum piece of the large-V^2 event
  double log_large_count;  // exceedance-count piece of the large-V^2 event
  double log_middle;       // dyadic supremum piece
  double log_small;        // small-V^2 piece
  double delta;            // V^2 split point delta * n * l(z_n)
  double z_n;
  bool z_at_boundary;
};

MdUpperBound md_combined_upper_bound(const MomentProfile& profile, int n,
                                     double x_n,
                                     std::size_t state_budget = kDefaultStateBudget);

}  // namespace gexpect

#endif  // GEXPECT_PROPOSITIONS_HPP
