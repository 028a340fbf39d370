#ifndef GEXPECT_HETEROGENEOUS_HPP
#define GEXPECT_HETEROGENEOUS_HPP

#include <span>
#include <vector>

#include "gexpect/discrete_law.hpp"

namespace gexpect {

// Aggregate second-moment quantities of an independent (not necessarily
// identically distributed) array:
//   b_bar_sq   = sum_k E[X_k^2]
//   b_under_sq = sum_k conjE[X_k^2]
//   q          = b_bar_sq / b_under_sq
//   delta      = (1/b_bar_sq) sum_k E[X_k^2 (1 ^ |x X_k / b_bar|)]
struct HeterogeneousMoments {
  int n;
  double x;
  double b_bar_sq;
  double b_under_sq;
  double q;
  double delta;
  double max_upper_second;  // max_k E[X_k^2]
};

HeterogeneousMoments heterogeneous_delta(
    std::span<const MeasureFamily* const> array, double x);

HeterogeneousMoments heterogeneous_delta(const std::vector<MeasureFamily>& array,
                                         double x);

}  // namespace gexpect

#endif  // GEXPECT_HETEROGENEOUS_HPP
