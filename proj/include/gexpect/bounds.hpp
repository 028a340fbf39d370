#ifndef GEXPECT_BOUNDS_HPP
#define GEXPECT_BOUNDS_HPP

#include <cstdint>

#include "gexpect/adversarial.hpp"
#include "gexpect/discrete_law.hpp"
#include "gexpect/moment_profile.hpp"

namespace gexpect {

// Exponential tail bounds for bounded summands |Y_i| <= a.
//
// Variant 1:  V( sum (Y_i - E[Y_i])        >= x ) <= exp{-x^2 / (2(B^2 + 2ax))}
// Variant 2:  V( max_k T_k >= x + shift )         <= 4 exp{-x^2 / (2(B^2 + 2ax))}
//             with shift = max_k sum_{i>k} E[-Y_i] + sum_i E[Y_i]
// Variant 3:  v( sum (Y_i - conj E[Y_i])   >= x ) <= exp{-x^2 / (2(B~^2 + 2ax))}
//
// var_sum is the appropriate sum of centered second moments for the variant;
// threshold_shift is the caller-computed translation (variant 2 only).
struct BernsteinBound {
  double value;            // bound including the prefactor
  double log_value;
  double prefactor;        // 1 or 4
  double threshold_shift;  // echo of the translated event (variant 2)
};

BernsteinBound bernstein_bound(int variant, double x, double a, double var_sum,
                               double threshold_shift = 0.0);

// shift = max_k sum_{i=k+1}^n E[-Y] + sum E[Y] for an iid block of length n.
double bernstein_v2_shift(const MeasureFamily& fam, int n);

// Exact both sides of E[M_n^2] <= 4 E[Q_n^2] on the outcome tree, where
// Q_k = exp{(lambda/2) sum_{i<=k}(X_i - conj E[X])}, Q_0 = 0, M = running max.
struct MaximalFactor {
  double lhs;  // E[M_n^2]
  double rhs;  // E[Q_n^2]
  bool ok;     // lhs <= 4 rhs (+ tolerance)
};

MaximalFactor maximal_factor_check(const MeasureFamily& fam, int n,
                                   double lambda,
                                   std::size_t state_budget = kDefaultStateBudget);

}  // namespace gexpect

#endif  // GEXPECT_BOUNDS_HPP
