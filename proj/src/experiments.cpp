#include "gexpect/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gexpect/errors.hpp"
#include "gexpect/parallel.hpp"
#include "gexpect/rng.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw ConfigError("gamma must lie in (0, 1/2) so x_n -> inf, x_n = o(sqrt n)");
}

// Adapted law-selection strategies for the Monte Carlo lower bound: each is
// a classical measure, so its event probability sits below the capacity.
struct LawStrategy {
  std::string label;
  // returns the law index for step i given the running state
  std::function<std::size_t(const MeasureFamily& fam, int step, double s,
                            double v2)> pick;
};

std::vector<LawStrategy> law_strategies(std::size_t max_laws) {
  std::vector<LawStrategy> out;
  for (std::size_t k = 0; k < max_laws; ++k)
    out.push_back({"law" + std::to_string(k),
                   [k](const MeasureFamily& fam, int, double, double) {
                     return std::min(k, fam.law_count() - 1);
                   }});
  auto variance_rank = [](const MeasureFamily& fam, bool largest) {
    std::size_t arg = 0;
    double best = largest ? -1.0 : std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < fam.law_count(); ++k) {
      double m2 = 0.0;
      for (std::size_t i = 0; i < fam.support_size(); ++i)
        m2 += fam.probs()[k][i] * fam.support()[i] * fam.support()[i];
      if (largest ? m2 > best : m2 < best) {
        best = m2;
        arg = k;
      }
    }
    return arg;
  };
  out.push_back({"push", [variance_rank](const MeasureFamily& fam, int, double s,
                                         double v2) {
                   // behind target: raise volatility, else calm down
                   return variance_rank(fam, s < std::sqrt(v2));
                 }});
  out.push_back({"pull", [variance_rank](const MeasureFamily& fam, int, double s,
                                         double v2) {
                   return variance_rank(fam, s >= std::sqrt(v2));
                 }});
  return out;
}

double sample_law(const MeasureFamily& fam, std::size_t law, double u) {
  double acc = 0.0;
  const auto& p = fam.probs()[law];
  for (std::size_t i = 0; i < fam.support_size(); ++i) {
    acc += p[i];
    if (u <= acc) return fam.support()[i];
  }
  return fam.support().back();
}

struct McEstimate {
  double p_hat;
  double stderr_;
  std::string label;
};

McEstimate mc_policy_lower_bound(std::span<const MeasureFamily* const> steps,
                                 double x, int paths, std::uint64_t seed) {
  std::size_t max_laws = 0;
  for (const auto* f : steps) max_laws = std::max(max_laws, f->law_count());
  const auto strategies = law_strategies(max_laws);

  std::vector<McEstimate> per(strategies.size());
  parallel_for(strategies.size(), [&](std::size_t si) {
    const auto& strat = strategies[si];
    std::int64_t hits = 0;
    for (int p = 0; p < paths; ++p) {
      double s = 0.0, v2 = 0.0;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        const MeasureFamily& fam = *steps[i];
        const std::size_t law = strat.pick(fam, static_cast<int>(i), s, v2);
        const double u = uniform01(
            seed, mix64(si * 1000003ULL + static_cast<std::uint64_t>(p)),
            static_cast<std::uint64_t>(i));
        const double xv = sample_law(fam, law, u);
        s += xv;
        v2 += xv * xv;
      }
      if (s >= x * std::sqrt(v2)) ++hits;
    }
    const double nn = static_cast<double>(paths);
    const double p_hat = static_cast<double>(hits) / nn;
    per[si] = {p_hat, std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / nn),
               strat.label};
  });

  McEstimate best = per[0];
  for (const auto& e : per)
    if (e.p_hat > best.p_hat) best = e;
  return best;
}

RateCurve heterogeneous_rate_curve(std::span<const MeasureFamily* const> array,
                                   const RateCurveOptions& opt,
                                   NonIidDiagnostics* diag) {
  validate_gamma(opt.gamma);
  if (opt.n_list.empty()) throw ConfigError("empty n list");
  RateCurve curve;
  for (const int n : opt.n_list) {
    if (n < 1 || static_cast<std::size_t>(n) > array.size())
      throw ConfigError("n exceeds the declared array length");
    const double x = std::pow(static_cast<double>(n), opt.gamma);
    const auto steps = array.subspan(0, static_cast<std::size_t>(n));
    const HeterogeneousMoments mom = heterogeneous_delta(steps, x);
    if (diag) {
      diag->max_second_ratio.push_back(x * x * mom.max_upper_second / mom.b_bar_sq);
      diag->delta_values.push_back(mom.delta);
      diag->q_values.push_back(mom.q);
      if (mom.q > opt.q_cap)
        throw ConfigError("q_n exceeds the configured cap; experiment refused");
    }

    bool have_exact = false;
    RateRow exact_row;
    try {
      const double cap = adversarial_value_sv(
          steps,
          [x](double s, double v2) { return s >= x * std::sqrt(v2) ? 1.0 : 0.0; },
          opt.state_budget);
      exact_row = {n, x, std::log(cap), std::log(cap) / (x * x), "exact-dp",
                   0.0, mom.delta, mom.q};
      have_exact = true;
    } catch (const ResourceError&) {
      // over budget: method switches to the sampled/bounded rows only
    }
    if (have_exact) curve.rows.push_back(exact_row);

    const McEstimate mc = mc_policy_lower_bound(
        steps, x, opt.mc_paths,
        mix64(opt.seed ^ mix64(static_cast<std::uint64_t>(n))));
    const double log_mc = mc.p_hat > 0.0 ? std::log(mc.p_hat) : kNegInf;
    curve.rows.push_back({n, x, log_mc, log_mc / (x * x), "mc-policy-lower",
                          mc.stderr_, mom.delta, mom.q});
  }
  return curve;
}

}  // namespace

RateCurve md_rate_curve(const MeasureFamily& fam, const RateCurveOptions& opt) {
  const MomentProfile profile{fam};
  if (profile.degenerate())
    throw ConfigError("diagnostics failed: l(x) vanishes identically "
                      "(conditions (I)-(III) are vacuous, nothing to normalize)");
  if (!std::isfinite(profile.r_squared_estimate()))
    throw ConfigError("diagnostics failed: condition (II) ratio is unbounded");

  std::vector<const MeasureFamily*> array(
      static_cast<std::size_t>(*std::max_element(opt.n_list.begin(),
                                                 opt.n_list.end())),
      &fam);
  RateCurve curve = heterogeneous_rate_curve(array, opt, nullptr);
  curve.r_squared = profile.r_squared_estimate();

  for (const int n : opt.n_list) {
    const double x = std::pow(static_cast<double>(n), opt.gamma);
    const MdUpperBound ub = md_combined_upper_bound(profile, n, x, opt.state_budget);
    curve.rows.push_back({n, x, ub.log_total, ub.log_total / (x * x),
                          "bernstein-upper", 0.0, 0.0, 1.0});
  }
  std::stable_sort(curve.rows.begin(), curve.rows.end(),
                   [](const RateRow& a, const RateRow& b) { return a.n < b.n; });
  return curve;
}

NonIidResult non_iid_experiment(const std::vector<MeasureFamily>& array,
                                const RateCurveOptions& opt) {
  if (array.empty()) throw ConfigError("empty family array");
  std::vector<const MeasureFamily*> ptrs;
  ptrs.reserve(array.size());
  for (const auto& f : array) ptrs.push_back(&f);

  NonIidResult out;
  out.curve = heterogeneous_rate_curve(ptrs, opt, &out.diagnostics);
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] >= v[i - 1]) return false;
    return true;
  };
  out.diagnostics.max_second_ok = decreasing(out.diagnostics.max_second_ratio);
  out.diagnostics.delta_trend_ok = decreasing(out.diagnostics.delta_values);
  out.diagnostics.q_ok = true;
  for (const double q : out.diagnostics.q_values)
    if (q > opt.q_cap) out.diagnostics.q_ok = false;
  std::stable_sort(out.curve.rows.begin(), out.curve.rows.end(),
                   [](const RateRow& a, const RateRow& b) { return a.n < b.n; });
  return out;
}

EtaBound eta_lower_bound(const MeasureFamily& fam, int n, double x_n, double beta,
                         std::size_t state_budget) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("eta_lower_bound: beta in the open interval (0, 1)");
  const MomentProfile profile{fam};
  const TruncationPoint tp = profile.solve_zn(n, x_n);
  const double b = 1.0 / tp.z_n;
  const double threshold = (1.0 + beta) * x_n * x_n;
  const double cap = adversarial_value_sv(
      fam, n,
      [b, threshold](double s, double v2) {
        return 2.0 * b * s - b * b * v2 >= threshold ? 1.0 : 0.0;
      },
      state_budget);
  EtaBound out;
  out.n = n;
  out.x_n = x_n;
  out.beta = beta;
  out.log_capacity = std::log(cap);
  out.normalized_rate = out.log_capacity / (x_n * x_n);
  const double c = 1.0 + beta / 4.0;
  out.target_rate = -0.5 * c * c;
  out.z_n = tp.z_n;
  out.z_at_boundary = tp.at_boundary;
  return out;
}

std::vector<ConjectureRow> conjecture_lower_capacity_rates(
    const MeasureFamily& fam, double gamma, const std::vector<int>& n_list,
    std::size_t state_budget) {
  validate_gamma(gamma);
  std::vector<ConjectureRow> rows;
  for (const int n : n_list) {
    const double x = std::pow(static_cast<double>(n), gamma);
    const double comp = adversarial_value_sv(
        fam, n,
        [x](double s, double v2) { return s < x * std::sqrt(v2) ? 1.0 : 0.0; },
        state_budget);
    const double lower = 1.0 - comp;
    const double log_lower = lower > 0.0 ? std::log(lower) : kNegInf;
    rows.push_back({n, x, log_lower, log_lower / (x * x)});
  }
  return rows;
}

IncrementSource IncrementSource::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("need sigma > 0");
  IncrementSource s;
  s.gaussian_ = true;
  s.sigma_ = sigma;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "gauss_%g", sigma);
  s.label_ = buf;
  return s;
}

IncrementSource IncrementSource::discrete(const MeasureFamily& fam,
                                          std::size_t law_index) {
  if (law_index >= fam.law_count()) throw ConfigError("law index out of range");
  IncrementSource s;
  s.gaussian_ = false;
  s.values_ = fam.support();
  double acc = 0.0;
  for (const double p : fam.probs()[law_index]) {
    acc += p;
    s.cumulative_.push_back(acc);
  }
  s.label_ = fam.name().empty() ? "law" : fam.name();
  s.label_ += "_" + std::to_string(law_index);
  return s;
}

double IncrementSource::sample(std::uint64_t key, std::uint64_t stream,
                               std::uint64_t counter) const {
  if (gaussian_) return sigma_ * normal01(key, stream, counter);
  const double u = uniform01(key, stream, counter);
  for (std::size_t i = 0; i < cumulative_.size(); ++i)
    if (u <= cumulative_[i]) return values_[i];
  return values_.back();
}

LilTraceReport lil_trace(const IncrementSource& source, const LilOptions& opt) {
  if (opt.n_max < 100) throw ConfigError("lil_trace: n_max >= 100");
  if (opt.seeds < 1) throw ConfigError("lil_trace: need seeds >= 1");
  std::vector<std::int64_t> schedule;
  if (opt.schedule) {
    schedule = opt.schedule->indices;
    for (const auto idx : schedule)
      if (idx > opt.n_max)
        throw ConfigError("schedule index exceeds n_max");
  }

  LilTraceReport rep;
  rep.cluster_grid = opt.cluster_grid;
  rep.schedule_indices = schedule;
  rep.seeds.resize(static_cast<std::size_t>(opt.seeds));

  parallel_for(static_cast<std::size_t>(opt.seeds), [&](std::size_t si) {
    LilSeedTrace trace;
    trace.seed_index = static_cast<int>(si);
    trace.max_ratio_stable = kNegInf;
    trace.min_ratio_stable = -kNegInf;
    trace.max_ratio_full = kNegInf;
    trace.grid_min_dist.assign(opt.cluster_grid.size(),
                               std::numeric_limits<double>::infinity());
    trace.schedule_block_max.assign(schedule.size(), kNegInf);

    const std::uint64_t stream = mix64(opt.seed_root ^ mix64(si + 1));
    double s = 0.0, v2 = 0.0;
    double ratio = 0.0;
    std::size_t sched_pos = 0;
    for (std::int64_t n = 1; n <= opt.n_max; ++n) {
      const double x = source.sample(opt.seed_root, stream,
                                     static_cast<std::uint64_t>(n));
      s += x;
      v2 += x * x;
      if (n < 3) continue;
      const double denom =
          std::sqrt(v2) * std::sqrt(2.0 * std::log(std::log(static_cast<double>(n))));
      ratio = denom > 0.0 ? s / denom : 0.0;
      if (n == 3) trace.ratio_at_3 = ratio;
      trace.max_ratio_full = std::max(trace.max_ratio_full, ratio);
      if (n >= opt.stable_min_n) {
        trace.max_ratio_stable = std::max(trace.max_ratio_stable, ratio);
        trace.min_ratio_stable = std::min(trace.min_ratio_stable, ratio);
      }
      for (std::size_t g = 0; g < opt.cluster_grid.size(); ++g)
        trace.grid_min_dist[g] = std::min(trace.grid_min_dist[g],
                                          std::fabs(ratio - opt.cluster_grid[g]));
      if (sched_pos < schedule.size()) {
        trace.schedule_block_max[sched_pos] =
            std::max(trace.schedule_block_max[sched_pos], ratio);
        if (n == schedule[sched_pos]) ++sched_pos;
      }
    }
    trace.final_ratio = ratio;
    rep.seeds[si] = trace;
  });
  return rep;
}

int LilTraceReport::stable_max_in_band(double lo, double hi) const {
  int count = 0;
  for (const auto& t : seeds)
    if (t.max_ratio_stable >= lo && t.max_ratio_stable <= hi) ++count;
  return count;
}

int LilTraceReport::cluster_covered(const std::vector<double>& grid,
                                    double radius) const {
  int count = 0;
  for (const auto& t : seeds) {
    bool all = true;
    for (const double g : grid) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cluster_grid.size(); ++i)
        if (cluster_grid[i] == g) best = t.grid_min_dist[i];
      if (best > radius) all = false;
    }
    if (all) ++count;
  }
  return count;
}

std::vector<BlockRatioReport> block_ratio_check(
    const std::vector<IncrementSource>& sources, const BlockSchedule& schedule,
    std::uint64_t seed_root) {
  std::vector<BlockRatioReport> reports(sources.size());
  parallel_for(sources.size(), [&](std::size_t si) {
    BlockRatioReport rep;
    rep.source_label = sources[si].label();
    rep.indices = schedule.indices;
    if (schedule.indices.size() < 3) {
      rep.asserted = false;  // nothing to assert on a short schedule
      reports[si] = rep;
      return;
    }
    const std::uint64_t stream = mix64(seed_root ^ mix64(si + 101));
    double v2 = 0.0;
    std::size_t pos = 0;
    for (std::int64_t n = 1; n <= schedule.indices.back(); ++n) {
      const double x = sources[si].sample(seed_root, stream,
                                          static_cast<std::uint64_t>(n));
      v2 += x * x;
      if (n == schedule.indices[pos]) {
        rep.v_values.push_back(std::sqrt(v2));
        ++pos;
      }
    }
    for (std::size_t i = 0; i + 1 < rep.v_values.size(); ++i)
      rep.ratios.push_back(rep.v_values[i] / rep.v_values[i + 1]);
    rep.asserted = rep.ratios.size() >= 2;
    rep.trend_ok = true;
    for (std::size_t i = 1; i < rep.ratios.size(); ++i)
      if (rep.ratios[i] >= rep.ratios[i - 1]) rep.trend_ok = false;
    reports[si] = rep;
  });
  return reports;
}

}  // namespace gexpect
