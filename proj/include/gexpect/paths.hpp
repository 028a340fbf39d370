#ifndef GEXPECT_PATHS_HPP
#define GEXPECT_PATHS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gexpect/rng.hpp"

namespace gexpect {

struct PolicyRange {
  double sigma_lower;
  double sigma_upper;
};

// Adapted volatility control: the step value may depend only on the state
// observed so far (step index, time, current W).
class VolatilityPolicy {
 public:
  using Rule = std::function<double(std::size_t step, double t, double w)>;

  static VolatilityPolicy constant(double sigma, PolicyRange range);
  // Alternates between a and b every block_len steps, starting with a.
  static VolatilityPolicy alternating(double a, double b, int block_len,
                                      PolicyRange range);
  // sigma_upper when (w > threshold) == high_above, else sigma_lower.
  static VolatilityPolicy threshold_feedback(double threshold, bool high_above,
                                             PolicyRange range);
  // Arbitrary adapted rule; the simulator enforces the range contract.
  static VolatilityPolicy custom(Rule rule, PolicyRange range, std::string label);

  double sigma_at(std::size_t step, double t, double w) const {
    return rule_(step, t, w);
  }
  const PolicyRange& range() const { return range_; }
  const std::string& label() const { return label_; }

 private:
  Rule rule_;
  PolicyRange range_{1.0, 1.0};
  std::string label_;
};

// Default search grid: 3 constants, 4 alternating schedules, 4 threshold
// feedback policies. Bang-bang members are the extremal candidates.
std::vector<VolatilityPolicy> default_policy_grid(PolicyRange range);

struct ControlledPath {
  double dt = 0.0;
  std::vector<double> increments;  // theta sqrt(dt) Z per step
  std::vector<double> w;           // w[i] = W((i+1) dt)
  std::vector<double> qv;          // qv[i] = integral of theta^2 up to (i+1) dt

  double w_final() const { return w.empty() ? 0.0 : w.back(); }
  double qv_final() const { return qv.empty() ? 0.0 : qv.back(); }
};

// Piecewise-constant-in-step Euler scheme, exact in law for the policy
// class; deterministic for a given (policy, T, dt, seed).
ControlledPath simulate_path(const VolatilityPolicy& policy, double T, double dt,
                             std::uint64_t seed);

struct SelfNormStat {
  int n;
  double s_n;
  double v_n_sq;
  double lil_ratio;  // S_n / (V_n sqrt(2 log log n))
};

// Unit-block statistics X_k = W(k) - W(k-1); entries start at n = 3 where
// the iterated logarithm is defined.
std::vector<SelfNormStat> self_normalized_series(const ControlledPath& path);

struct PolicyEstimate {
  std::string label;
  double estimate;
  double stderr_;
};

struct PolicySearchResult {
  std::size_t best_index;
  std::string best_label;
  double estimate;
  double stderr_;
  bool lower_bound_only;  // grid search only reaches a sup from below
  std::vector<PolicyEstimate> per_policy;
};

using PathStatistic = std::function<double(const ControlledPath&)>;

PolicySearchResult worst_case_policy_search(
    const PathStatistic& statistic, const std::vector<VolatilityPolicy>& grid,
    int paths_per_policy, double T, double dt, std::uint64_t seed);

// Re-indexes the path by quadratic-variation time and checks standard
// Brownian scaling: unit-variance normalized block increments and
// vanishing lag-1 correlation, both at the given confidence.
struct DdsReport {
  int blocks = 0;
  double variance = 0.0;
  double variance_lo = 0.0;  // accepted band
  double variance_hi = 0.0;
  double lag1_corr = 0.0;
  double corr_bound = 0.0;
  bool variance_ok = false;
  bool corr_ok = false;
};

DdsReport dds_time_change_check(const ControlledPath& path,
                                double confidence = 0.99);

// Per-unit-block compensated squares m_k = X_k^2 - (qv(k) - qv(k-1)).
struct BlockCompensatorStats {
  int blocks = 0;
  double mean = 0.0;
  double second_moment = 0.0;
};

BlockCompensatorStats block_compensator_stats(const ControlledPath& path);

}  // namespace gexpect

#endif  // GEXPECT_PATHS_HPP
