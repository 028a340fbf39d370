#ifndef GEXPECT_MOMENT_PROFILE_HPP
#define GEXPECT_MOMENT_PROFILE_HPP

#include <vector>

#include "gexpect/discrete_law.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

struct TruncationPoint {
  int n = 0;
  double x_n = 0.0;
  double z_n = 0.0;
  bool at_boundary = false;  // precondition failed; z_n clamped to b + 1
};

struct ConditionRow {
  double x;
  double l_upper;    // E[X^2 ^ x^2]
  double l_conj;     // conjugate truncated second moment
  double ratio_i;    // x^2 V(|X| >= x) / l(x)
  double ratio_ii;   // l_upper / l_conj
  double tail_iii;   // E[(|X| - x)^+]
};

struct ConditionReport {
  std::vector<ConditionRow> rows;
  double r_squared;            // max observed ratio_ii
  double support_radius;       // largest |atom|
  bool tail_conditions_exact;  // compact support: (I), (III) vanish beyond it
};

// Truncated second moments l(x) = E[X^2 ^ x^2], the zero threshold
// b = inf{x >= 0 : l(x) > 0}, and the z_n root machinery.
class MomentProfile {
 public:
  explicit MomentProfile(MeasureFamily fam);

  const MeasureFamily& family() const { return fam_; }

  // which = Upper: max over laws; Lower: conjugate (min). x >= 0 required.
  double truncated_moment(double x, Envelope which) const;

  double b() const { return b_; }
  bool degenerate() const { return degenerate_; }
  double support_radius() const { return support_radius_; }
  double upper_second_moment() const;

  // Condition (II) ratio bound estimated on a default grid.
  double r_squared_estimate() const { return r_squared_; }

  // Smallest s >= b+1 with l(s)/s^2 <= x_n^2/n; bracketing by doubling and
  // bisection on the leftmost crossing, with an exact solve on the final
  // piecewise-quadratic piece. Precondition failure returns the boundary
  // point flagged, not an exception.
  TruncationPoint solve_zn(int n, double x_n) const;

  ConditionReport condition_diagnostics(const std::vector<double>& x_grid) const;

 private:
  double ratio(double s) const;  // l(s) / s^2

  MeasureFamily fam_;
  double b_ = 0.0;
  bool degenerate_ = false;
  double support_radius_ = 0.0;
  double r_squared_ = 1.0;
};

}  // namespace gexpect

#endif  // GEXPECT_MOMENT_PROFILE_HPP
