#ifndef GEXPECT_EXPANSION_HPP
#define GEXPECT_EXPANSION_HPP

#include "gexpect/adversarial.hpp"
#include "gexpect/discrete_law.hpp"
#include "gexpect/moment_profile.hpp"

namespace gexpect {

// Support transforms used to manufacture test variables (e.g. centered ones)
// from a family without touching its probabilities.
MeasureFamily shift_support(const MeasureFamily& fam, double delta);
MeasureFamily scale_support(const MeasureFamily& fam, double factor);

// One-step expansion bounds for E[exp{lambda(b xi) - theta(b xi)^2}].
//
// Truncated form (explicit remainder constant
//   K = theta^{3/2} e^{lambda^2/4theta}/2 + |lambda| + e^{lambda^2/4theta}):
//   main = 1 + (lambda^2/2 - theta)^+ E[(b xi)^2 ^ 1]
//            - (lambda^2/2 - theta)^- conjE[(b xi)^2 ^ 1]
//   remainder = K (E[|b xi|^3 ^ 1] + E[(|b xi|-1)^+] + V(|b xi| > 1))
//
// Raw form (K = theta^{3/2} e^{lambda^2/4theta}/2 + 2 e^{-3/2} theta
//   e^{lambda^2/4theta}) uses untruncated second moments and
//   remainder moment E[|b xi|^3 ^ (b xi)^2].
//
// The upper bound requires E[xi] <= 0 (lambda >= 0) or conjE[xi] >= 0
// (lambda < 0); the lower bound the mirror condition.
enum class ExpansionForm { Truncated, Raw };

struct ExpansionBound {
  double exact;       // one-step E[exp{...}], evaluated directly
  double main_term;
  double remainder;   // K * moment terms
  double upper;       // main + remainder
  double lower;       // main - remainder
  bool upper_valid;   // sign hypotheses for the upper form hold
  bool lower_valid;
};

ExpansionBound moment_expansion_bound(const MeasureFamily& xi, double b,
                                      double lambda, double theta,
                                      ExpansionForm form);

// Exact n-step value of E[exp{lambda b S_n - theta b^2 V_n^2}] against the
// predicted exponent (lambda^2/2 - theta) x_n^2. The scale b is 1/z_n when
// lambda^2/2 >= theta, and (1/z_n) l(z_n)/l_conj(z_n) otherwise.
struct ExpQuadraticValue {
  double log_exact;
  double log_predicted;  // (lambda^2/2 - theta) x_n^2
  double log_ratio;      // log_exact - log_predicted
  double b;
  double z_n;
  bool z_at_boundary;
};

enum class ExpQuadScale { Auto, Upper, ConjugateScaled };

ExpQuadraticValue exp_quadratic_value(const MomentProfile& profile, int n,
                                      double x_n, double lambda, double theta,
                                      ExpQuadScale scale = ExpQuadScale::Auto,
                                      std::size_t state_budget = kDefaultStateBudget);

}  // namespace gexpect

#endif  // GEXPECT_EXPANSION_HPP
