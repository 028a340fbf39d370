#include "gexpect/paths.hpp"

#include <algorithm>
#include <cmath>

#include "gexpect/errors.hpp"
#include "gexpect/parallel.hpp"

namespace gexpect {

namespace {
void validate_range(const PolicyRange& r) {
  if (!(r.sigma_lower > 0.0) || !(r.sigma_upper >= r.sigma_lower))
    throw ConfigError("policy range: need 0 < sigma_lower <= sigma_upper");
}

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}
}  // namespace

VolatilityPolicy VolatilityPolicy::constant(double sigma, PolicyRange range) {
  validate_range(range);
  VolatilityPolicy p;
  p.rule_ = [sigma](std::size_t, double, double) { return sigma; };
  p.range_ = range;
  p.label_ = "const_" + num_label(sigma);
  return p;
}

VolatilityPolicy VolatilityPolicy::alternating(double a, double b, int block_len,
                                               PolicyRange range) {
  validate_range(range);
  if (block_len < 1) throw ConfigError("alternating: block_len >= 1");
  VolatilityPolicy p;
  p.rule_ = [a, b, block_len](std::size_t step, double, double) {
    return (step / static_cast<std::size_t>(block_len)) % 2 == 0 ? a : b;
  };
  p.range_ = range;
  p.label_ = "alt_" + num_label(a) + "_" + num_label(b) + "_len" +
             std::to_string(block_len);
  return p;
}

VolatilityPolicy VolatilityPolicy::threshold_feedback(double threshold,
                                                      bool high_above,
                                                      PolicyRange range) {
  validate_range(range);
  VolatilityPolicy p;
  const double hi = range.sigma_upper;
  const double lo = range.sigma_lower;
  p.rule_ = [threshold, high_above, hi, lo](std::size_t, double, double w) {
    return ((w > threshold) == high_above) ? hi : lo;
  };
  p.range_ = range;
  p.label_ = std::string("fb_") + (high_above ? "above" : "below") + "_" +
             num_label(threshold);
  return p;
}

VolatilityPolicy VolatilityPolicy::custom(Rule rule, PolicyRange range,
                                          std::string label) {
  validate_range(range);
  VolatilityPolicy p;
  p.rule_ = std::move(rule);
  p.range_ = range;
  p.label_ = std::move(label);
  return p;
}

std::vector<VolatilityPolicy> default_policy_grid(PolicyRange range) {
  validate_range(range);
  const double lo = range.sigma_lower;
  const double hi = range.sigma_upper;
  std::vector<VolatilityPolicy> grid;
  grid.push_back(VolatilityPolicy::constant(lo, range));
  grid.push_back(VolatilityPolicy::constant(hi, range));
  grid.push_back(VolatilityPolicy::constant(0.5 * (lo + hi), range));
  grid.push_back(VolatilityPolicy::alternating(lo, hi, 1, range));
  grid.push_back(VolatilityPolicy::alternating(hi, lo, 1, range));
  grid.push_back(VolatilityPolicy::alternating(lo, hi, 2, range));
  grid.push_back(VolatilityPolicy::alternating(hi, lo, 2, range));
  grid.push_back(VolatilityPolicy::threshold_feedback(0.0, true, range));
  grid.push_back(VolatilityPolicy::threshold_feedback(0.0, false, range));
  grid.push_back(VolatilityPolicy::threshold_feedback(1.0, true, range));
  grid.push_back(VolatilityPolicy::threshold_feedback(-1.0, false, range));
  return grid;
}

ControlledPath simulate_path(const VolatilityPolicy& policy, double T, double dt,
                             std::uint64_t seed) {
  if (!(dt > 0.0)) throw DomainError("simulate_path: need dt > 0");
  if (T < 0.0) throw DomainError("simulate_path: need T >= 0");
  const double steps_real = T / dt;
  const long long steps = static_cast<long long>(std::llround(steps_real));
  if (std::fabs(steps_real - static_cast<double>(steps)) > 1e-9)
    throw DomainError("simulate_path: T must be an integer number of steps");

  ControlledPath path;
  path.dt = dt;
  path.increments.reserve(static_cast<std::size_t>(steps));
  path.w.reserve(static_cast<std::size_t>(steps));
  path.qv.reserve(static_cast<std::size_t>(steps));
  const double sqrt_dt = std::sqrt(dt);
  double w = 0.0, qv = 0.0;
  for (long long i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double sigma = policy.sigma_at(static_cast<std::size_t>(i), t, w);
    if (!(sigma >= policy.range().sigma_lower &&
          sigma <= policy.range().sigma_upper))
      throw ContractError("policy produced sigma outside its declared range");
    const double z = normal01(seed, 0, static_cast<std::uint64_t>(i));
    const double dw = sigma * sqrt_dt * z;
    w += dw;
    qv += sigma * sigma * dt;
    path.increments.push_back(dw);
    path.w.push_back(w);
    path.qv.push_back(qv);
  }
  return path;
}

std::vector<SelfNormStat> self_normalized_series(const ControlledPath& path) {
  if (!(path.dt > 0.0)) throw ConfigError("empty path");
  const double per_unit_real = 1.0 / path.dt;
  const long long per_unit = static_cast<long long>(std::llround(per_unit_real));
  if (std::fabs(per_unit_real - static_cast<double>(per_unit)) > 1e-9)
    throw DomainError("unit blocks need 1/dt to be an integer");
  const long long units =
      static_cast<long long>(path.w.size()) / per_unit;
  if (units < 3) throw DomainError("need at least 3 unit blocks");

  std::vector<SelfNormStat> stats;
  double s = 0.0, v2 = 0.0, prev_w = 0.0;
  for (long long k = 1; k <= units; ++k) {
    const double wk = path.w[static_cast<std::size_t>(k * per_unit - 1)];
    const double x = wk - prev_w;
    prev_w = wk;
    s += x;
    v2 += x * x;
    if (k >= 3) {
      const double denom =
          std::sqrt(v2) * std::sqrt(2.0 * std::log(std::log(static_cast<double>(k))));
      stats.push_back({static_cast<int>(k), s, v2,
                       denom > 0.0 ? s / denom : 0.0});
    }
  }
  return stats;
}

PolicySearchResult worst_case_policy_search(
    const PathStatistic& statistic, const std::vector<VolatilityPolicy>& grid,
    int paths_per_policy, double T, double dt, std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("policy grid is empty");
  if (paths_per_policy < 2) throw ConfigError("need at least 2 paths per policy");

  std::vector<PolicyEstimate> per_policy(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    double sum = 0.0, sum_sq = 0.0;
    for (int j = 0; j < paths_per_policy; ++j) {
      const std::uint64_t path_seed =
          mix64(seed ^ mix64(static_cast<std::uint64_t>(i) * 1000003ULL +
                             static_cast<std::uint64_t>(j)));
      const ControlledPath path = simulate_path(grid[i], T, dt, path_seed);
      const double v = statistic(path);
      sum += v;
      sum_sq += v * v;
    }
    const double nn = static_cast<double>(paths_per_policy);
    const double mean = sum / nn;
    const double var = std::max(0.0, sum_sq / nn - mean * mean);
    per_policy[i] = {grid[i].label(), mean, std::sqrt(var / nn)};
  });

  PolicySearchResult out;
  out.per_policy = per_policy;
  out.best_index = 0;
  for (std::size_t i = 1; i < per_policy.size(); ++i)
    if (per_policy[i].estimate > per_policy[out.best_index].estimate)
      out.best_index = i;
  out.best_label = per_policy[out.best_index].label;
  out.estimate = per_policy[out.best_index].estimate;
  out.stderr_ = per_policy[out.best_index].stderr_;
  out.lower_bound_only = true;
  return out;
}

DdsReport dds_time_change_check(const ControlledPath& path, double confidence) {
  if (path.w.empty()) throw ConfigError("empty path");
  if (!(confidence > 0.5 && confidence < 1.0))
    throw ConfigError("confidence in (0.5, 1)");

  // step-aligned unit blocks in quadratic-variation time; normalizing each
  // increment by its exact block variance gives iid standard normals
  std::vector<double> y;
  double target = 1.0;
  double prev_w = 0.0, prev_qv = 0.0;
  for (std::size_t i = 0; i < path.w.size(); ++i) {
    if (path.qv[i] >= target) {
      const double dqv = path.qv[i] - prev_qv;
      if (dqv > 0.0) y.push_back((path.w[i] - prev_w) / std::sqrt(dqv));
      prev_w = path.w[i];
      prev_qv = path.qv[i];
      target = prev_qv + 1.0;
    }
  }

  DdsReport rep;
  rep.blocks = static_cast<int>(y.size());
  if (y.size() < 8) {  // too short to test; report only
    rep.variance_ok = rep.corr_ok = true;
    return rep;
  }
  const double m = static_cast<double>(y.size());
  double ss = 0.0;
  for (const double v : y) ss += v * v;
  rep.variance = ss / m;

  // two-sided chi^2 band via the Wilson-Hilferty cube approximation
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double a = 2.0 / (9.0 * m);
  rep.variance_lo = std::pow(1.0 - a - z * std::sqrt(a), 3.0);
  rep.variance_hi = std::pow(1.0 - a + z * std::sqrt(a), 3.0);
  rep.variance_ok = rep.variance >= rep.variance_lo && rep.variance <= rep.variance_hi;

  double lag = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) lag += y[i] * y[i + 1];
  rep.lag1_corr = lag / ss;
  rep.corr_bound = z / std::sqrt(m);
  rep.corr_ok = std::fabs(rep.lag1_corr) <= rep.corr_bound;
  return rep;
}

BlockCompensatorStats block_compensator_stats(const ControlledPath& path) {
  BlockCompensatorStats out;
  if (!(path.dt > 0.0)) return out;
  const double per_unit_real = 1.0 / path.dt;
  const long long per_unit = static_cast<long long>(std::llround(per_unit_real));
  if (std::fabs(per_unit_real - static_cast<double>(per_unit)) > 1e-9)
    throw DomainError("unit blocks need 1/dt to be an integer");
  const long long units = static_cast<long long>(path.w.size()) / per_unit;
  double prev_w = 0.0, prev_qv = 0.0;
  double sum = 0.0, sum_sq = 0.0;
  for (long long k = 1; k <= units; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k * per_unit - 1);
    const double x = path.w[idx] - prev_w;
    const double dqv = path.qv[idx] - prev_qv;
    prev_w = path.w[idx];
    prev_qv = path.qv[idx];
    const double mk = x * x - dqv;
    sum += mk;
    sum_sq += mk * mk;
  }
  out.blocks = static_cast<int>(units);
  if (units > 0) {
    out.mean = sum / static_cast<double>(units);
    out.second_moment = sum_sq / static_cast<double>(units);
  }
  return out;
}

}  // namespace gexpect
