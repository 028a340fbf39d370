#include "gexpect/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gexpect/errors.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

BernsteinBound bernstein_bound(int variant, double x, double a, double var_sum,
                               double threshold_shift) {
  if (variant < 1 || variant > 3) throw DomainError("bernstein: variant in {1,2,3}");
  if (!(x > 0.0)) throw DomainError("bernstein: need x > 0");
  if (!(a > 0.0)) throw DomainError("bernstein: need a > 0");
  if (!(var_sum > 0.0)) throw DomainError("bernstein: need var_sum > 0");
  BernsteinBound b;
  b.prefactor = variant == 2 ? 4.0 : 1.0;
  b.threshold_shift = variant == 2 ? threshold_shift : 0.0;
  const double log_exp = -x * x / (2.0 * (var_sum + 2.0 * a * x));
  b.log_value = std::log(b.prefactor) + log_exp;
  b.value = b.prefactor * std::exp(log_exp);
  return b;
}

double bernstein_v2_shift(const MeasureFamily& fam, int n) {
  std::vector<double> id(fam.support_size());
  std::vector<double> neg(fam.support_size());
  for (std::size_t i = 0; i < id.size(); ++i) {
    id[i] = fam.support()[i];
    neg[i] = -fam.support()[i];
  }
  const double mean_up = upper_expectation_values(fam, id);
  const double mean_neg = upper_expectation_values(fam, neg);
  // max_k (n-k) E[-Y] is attained at k = 0 when E[-Y] >= 0, else k = n
  return std::max(static_cast<double>(n) * mean_neg, 0.0) +
         static_cast<double>(n) * mean_up;
}

MaximalFactor maximal_factor_check(const MeasureFamily& fam, int n,
                                   double lambda, std::size_t state_budget) {
  if (n < 1) throw DomainError("maximal_factor_check: need n >= 1");
  std::vector<double> id(fam.support_size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = fam.support()[i];
  const double conj_mean = conjugate_expectation_values(fam, id);

  // partial sums of X_i - conj E[X]; M_n^2 = exp{lambda * max_k P_k}
  const double log_lhs = adversarial_log_expectation_runmax(
      fam, n, -conj_mean,
      [lambda](double, double runmax) { return lambda * runmax; }, state_budget);
  const double log_rhs = adversarial_log_expectation_runmax(
      fam, n, -conj_mean,
      [lambda](double sum, double) { return lambda * sum; }, state_budget);

  MaximalFactor out;
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.ok = log_lhs <= std::log(4.0) + log_rhs + 1e-12;
  return out;
}

}  // namespace gexpect
