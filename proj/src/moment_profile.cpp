#include "gexpect/moment_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gexpect/errors.hpp"

namespace gexpect {

namespace {
double truncated_second_moment(const MeasureFamily& fam, double x,
                               Envelope which) {
  const double x2 = x * x;
  double best = which == Envelope::Upper
                    ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
  for (const auto& p : fam.probs()) {
    double e = 0.0;
    for (std::size_t i = 0; i < fam.support_size(); ++i) {
      const double v = fam.support()[i];
      e += p[i] * std::min(v * v, x2);
    }
    best = which == Envelope::Upper ? std::max(best, e) : std::min(best, e);
  }
  return best;
}
}  // namespace

MomentProfile::MomentProfile(MeasureFamily fam) : fam_(std::move(fam)) {
  degenerate_ = fam_.degenerate_at_zero();
  b_ = 0.0;  // l(x) > 0 for every x > 0 once any law charges a nonzero atom
  for (const double v : fam_.support())
    support_radius_ = std::max(support_radius_, std::fabs(v));

  // grid for the condition (II) ratio: atom magnitudes, midpoints, beyond
  std::vector<double> grid;
  for (const double v : fam_.support())
    if (v != 0.0) grid.push_back(std::fabs(v));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> extended = grid;
  for (std::size_t i = 1; i < grid.size(); ++i)
    extended.push_back(0.5 * (grid[i - 1] + grid[i]));
  if (!grid.empty()) {
    extended.push_back(1.5 * grid.back());
    extended.push_back(3.0 * grid.back());
  }
  r_squared_ = 1.0;
  for (const double x : extended) {
    const double lu = truncated_second_moment(fam_, x, Envelope::Upper);
    const double lc = truncated_second_moment(fam_, x, Envelope::Lower);
    if (lu > 0.0)
      r_squared_ = std::max(
          r_squared_, lc > 0.0 ? lu / lc : std::numeric_limits<double>::infinity());
  }
}

double MomentProfile::truncated_moment(double x, Envelope which) const {
  if (x < 0.0) throw DomainError("truncated moment needs x >= 0");
  return truncated_second_moment(fam_, x, which);
}

double MomentProfile::upper_second_moment() const {
  return truncated_second_moment(fam_, support_radius_ + 1.0, Envelope::Upper);
}

double MomentProfile::ratio(double s) const {
  return truncated_second_moment(fam_, s, Envelope::Upper) / (s * s);
}

TruncationPoint MomentProfile::solve_zn(int n, double x_n) const {
  if (n < 1) throw DomainError("solve_zn: need n >= 1");
  if (!(x_n > 0.0)) throw DomainError("solve_zn: need x_n > 0");
  TruncationPoint tp;
  tp.n = n;
  tp.x_n = x_n;
  const double boundary = b_ + 1.0;
  const double target = x_n * x_n / static_cast<double>(n);
  if (degenerate_ || ratio(boundary) <= target) {
    tp.z_n = boundary;
    tp.at_boundary = true;
    return tp;
  }
  // bracket by doubling: ratio is eventually l_inf / s^2 -> 0
  double lo = boundary;
  double hi = 2.0 * boundary;
  while (ratio(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("solve_zn: no crossing found");
  }
  // leftmost crossing: keep ratio(lo) > target >= ratio(hi), shrink to ulp
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (ratio(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  // exact solve on the active quadratic piece: l(s) = A + B s^2 near hi
  const double x2 = hi * hi;
  double best_a = 0.0, best_b = 0.0, best_val = -1.0;
  for (const auto& p : fam_.probs()) {
    double a = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < fam_.support_size(); ++i) {
      const double v = fam_.support()[i];
      if (v * v <= x2)
        a += p[i] * v * v;
      else
        bb += p[i];
    }
    const double val = a + bb * x2;
    if (val > best_val) {
      best_val = val;
      best_a = a;
      best_b = bb;
    }
  }
  if (target > best_b) {
    const double s_exact = std::sqrt(best_a / (target - best_b));
    // accept only if it stays on the same piece the bisection landed on
    if (s_exact >= lo * (1.0 - 1e-12) && s_exact <= hi * (1.0 + 1e-12) &&
        ratio(s_exact) <= target * (1.0 + 1e-12))
      hi = std::max(s_exact, lo);
  }
  tp.z_n = hi;
  return tp;
}

ConditionReport MomentProfile::condition_diagnostics(
    const std::vector<double>& x_grid) const {
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (x_grid[i] <= 0.0) throw DomainError("condition grid must be positive");
    if (i > 0 && x_grid[i] <= x_grid[i - 1])
      throw DomainError("condition grid must be increasing");
  }
  ConditionReport rep;
  rep.support_radius = support_radius_;
  rep.tail_conditions_exact = true;
  rep.r_squared = 1.0;
  for (const double x : x_grid) {
    ConditionRow row;
    row.x = x;
    row.l_upper = truncated_second_moment(fam_, x, Envelope::Upper);
    row.l_conj = truncated_second_moment(fam_, x, Envelope::Lower);
    const CapacityPair tail = capacity(
        fam_, [x](double v) { return std::fabs(v) >= x; });
    row.ratio_i = row.l_upper > 0.0 ? x * x * tail.upper / row.l_upper : 0.0;
    row.ratio_ii = row.l_conj > 0.0
                       ? row.l_upper / row.l_conj
                       : (row.l_upper > 0.0
                              ? std::numeric_limits<double>::infinity()
                              : 1.0);
    row.tail_iii = upper_expectation(
        fam_, [x](double v) { return std::max(std::fabs(v) - x, 0.0); });
    rep.r_squared = std::max(rep.r_squared, row.ratio_ii);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace gexpect
