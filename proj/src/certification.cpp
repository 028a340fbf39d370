#include "gexpect/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gexpect/bounds.hpp"
#include "gexpect/errors.hpp"
#include "gexpect/expansion.hpp"
#include "gexpect/parallel.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

namespace {

constexpr double kAtomPool[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};

double upper_mean(const MeasureFamily& fam) {
  return upper_expectation(fam, [](double v) { return v; });
}

double lower_mean(const MeasureFamily& fam) {
  return conjugate_expectation(fam, [](double v) { return v; });
}

}  // namespace

MeasureFamily random_certification_family(RandomStream& rs) {
  const int law_count = 2 + static_cast<int>(rs.next_uniform() * 2.0);  // 2-3
  const int atom_count = 2 + static_cast<int>(rs.next_uniform() * 4.0);  // 2-5
  // pick distinct atoms from the pool
  std::vector<double> pool(std::begin(kAtomPool), std::end(kAtomPool));
  std::vector<double> atoms;
  for (int i = 0; i < atom_count; ++i) {
    const std::size_t pick =
        static_cast<std::size_t>(rs.next_uniform() * static_cast<double>(pool.size()));
    atoms.push_back(pool[std::min(pick, pool.size() - 1)]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(std::min(pick, pool.size() - 1)));
  }
  std::vector<std::vector<DiscreteLaw::Atom>> law_atoms;
  for (int k = 0; k < law_count; ++k) {
    std::vector<double> weights;
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      weights.push_back(0.05 + rs.next_uniform());
      sum += weights.back();
    }
    std::vector<DiscreteLaw::Atom> la;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      la.push_back({atoms[i], weights[i] / sum});
    law_atoms.push_back(std::move(la));
  }
  return MeasureFamily::from_atom_lists(law_atoms);
}

namespace {

void check_bernstein_rows(const MeasureFamily& fam, int n, double tol,
                          std::size_t budget, std::vector<SweepRow>& rows) {
  const double nn = static_cast<double>(n);
  const double mu_up = upper_mean(fam);
  const double mu_lo = lower_mean(fam);
  double a = 0.0;
  for (const double v : fam.support()) a = std::max(a, std::fabs(v));
  if (!(a > 0.0)) return;

  const double var_up =
      nn * upper_expectation(fam, [mu_up](double v) { return (v - mu_up) * (v - mu_up); });
  const double var_lo =
      nn * upper_expectation(fam, [mu_lo](double v) { return (v - mu_lo) * (v - mu_lo); });
  if (!(var_up > 0.0) || !(var_lo > 0.0)) return;

  const double shift = bernstein_v2_shift(fam, n);
  for (const double c : {0.75, 1.5, 3.0}) {
    const double x = c * std::sqrt(var_up);

    {  // variant 1: centered-sum tail
      const BernsteinBound b = bernstein_bound(1, x, a, var_up);
      const double threshold = x + nn * mu_up;
      const double cap = adversarial_value_sv(
          fam, n,
          [threshold](double s, double) { return s >= threshold ? 1.0 : 0.0; },
          budget);
      rows.push_back({BoundId::BIneq1, fam.hash(), n, x, b.value, cap,
                      b.value - cap, b.value - cap >= -tol});
    }
    {  // variant 2: maximum of raw partial sums beyond the translate
      const BernsteinBound b = bernstein_bound(2, x, a, var_up, shift);
      const double threshold = x + shift;
      const double cap = adversarial_value_runmax(
          fam, n, 0.0,
          [threshold](double, double m) { return m >= threshold ? 1.0 : 0.0; },
          budget);
      rows.push_back({BoundId::BIneq2, fam.hash(), n, x, b.value, cap,
                      b.value - cap, b.value - cap >= -tol});
    }
    {  // variant 3: lower capacity of the conjugate-centered tail
      const BernsteinBound b = bernstein_bound(3, x, a, var_lo);
      const double threshold = x + nn * mu_lo;
      const double comp = adversarial_value_sv(
          fam, n,
          [threshold](double s, double) { return s < threshold ? 1.0 : 0.0; },
          budget);
      const double cap = 1.0 - comp;
      rows.push_back({BoundId::BIneq3, fam.hash(), n, x, b.value, cap,
                      b.value - cap, b.value - cap >= -tol});
    }
  }
}

void check_expansion_rows(const MeasureFamily& fam, RandomStream& rs, double tol,
                          std::vector<SweepRow>& rows) {
  const double mu_up = upper_mean(fam);
  const double mu_lo = lower_mean(fam);
  const MeasureFamily xi_up = shift_support(fam, -mu_up);  // E[xi] = 0
  const MeasureFamily xi_lo = shift_support(fam, -mu_lo);  // conjE[xi] = 0

  for (int rep = 0; rep < 2; ++rep) {
    const double b = 0.1 + 1.2 * rs.next_uniform();
    const double lambda = 0.2 + 1.8 * rs.next_uniform();
    const double theta = 0.15 + 1.6 * rs.next_uniform();
    for (const ExpansionForm form : {ExpansionForm::Truncated, ExpansionForm::Raw}) {
      const bool truncated = form == ExpansionForm::Truncated;
      {
        const ExpansionBound eb = moment_expansion_bound(xi_up, b, lambda, theta, form);
        rows.push_back({truncated ? BoundId::MomentG1Upper : BoundId::Lem6_1Upper,
                        fam.hash(), 1, b, eb.upper, eb.exact, eb.upper - eb.exact,
                        eb.upper_valid && eb.upper - eb.exact >= -tol});
      }
      {
        const ExpansionBound eb = moment_expansion_bound(xi_lo, b, lambda, theta, form);
        rows.push_back({truncated ? BoundId::MomentG1Lower : BoundId::Lem6_1Lower,
                        fam.hash(), 1, b, eb.lower, eb.exact, eb.exact - eb.lower,
                        eb.lower_valid && eb.exact - eb.lower >= -tol});
      }
    }
  }
}

void check_second_term_row(const MeasureFamily& fam, int n, double tol,
                           std::size_t budget, std::vector<SweepRow>& rows) {
  const double m2 = upper_expectation(fam, [](double v) { return v * v; });
  if (!(m2 > 0.0)) return;
  const double x = 2.0 + 1.5 * (static_cast<double>(fam.hash() % 7) / 7.0);
  const double bound = std::exp(prop61_second_term_log_bound(x));
  const double cap = prop61_second_term_exact(fam, n, x, 120.0, budget);
  rows.push_back({BoundId::Prop6_1, fam.hash(), n, x, bound, cap, bound - cap,
                  bound - cap >= -tol});
}

}  // namespace

SweepResult run_certification_sweep(const SweepConfig& cfg) {
  RandomStream root(cfg.seed, 0);
  std::vector<std::vector<SweepRow>> slots(static_cast<std::size_t>(cfg.config_count));

  parallel_for(static_cast<std::size_t>(cfg.config_count), [&](std::size_t i) {
    RandomStream rs = root.child(i);
    const MeasureFamily fam = random_certification_family(rs);
    const int n =
        cfg.min_n + static_cast<int>(rs.next_uniform() *
                                     static_cast<double>(cfg.max_n - cfg.min_n + 1));
    auto& rows = slots[i];
    check_bernstein_rows(fam, std::min(n, cfg.max_n), cfg.tolerance,
                         cfg.state_budget, rows);
    check_expansion_rows(fam, rs, cfg.tolerance, rows);
    check_second_term_row(fam, std::min(n, cfg.max_n), cfg.tolerance,
                          cfg.state_budget, rows);
  });

  SweepResult out;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (auto& rows : slots)
    for (const SweepRow& r : rows) {
      if (!r.ok) ++out.violations;
      out.min_slack = std::min(out.min_slack, r.slack);
      out.rows.push_back(r);
    }
  return out;
}

std::vector<BinomialCheck> classical_bernstein_battery(int max_n) {
  std::vector<BinomialCheck> out;
  const MeasureFamily fam = MeasureFamily::rademacher();
  for (int n = 2; n <= max_n; ++n) {
    const double nn = static_cast<double>(n);
    for (const double c : {0.5, 1.0, 1.5, 2.0}) {
      const double x = c * std::sqrt(nn);
      // exact tail P(S_n >= x) by enumeration: S = 2k - n over k heads
      double tail = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double s = 2.0 * k - nn;
        if (s >= x) {
          double log_c = std::lgamma(nn + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(nn - k + 1.0);
          tail += std::exp(log_c - nn * std::log(2.0));
        }
      }
      const double dp = adversarial_value_sv(
          fam, n, [x](double s, double) { return s >= x ? 1.0 : 0.0; });
      const BernsteinBound b = bernstein_bound(1, x, 1.0, nn);
      BinomialCheck chk;
      chk.n = n;
      chk.x = x;
      chk.exact_tail = tail;
      chk.dp_tail = dp;
      chk.bound = b.value;
      chk.ok = std::fabs(dp - tail) <= 1e-12 && tail <= b.value + 1e-12;
      out.push_back(chk);
    }
  }
  return out;
}

}  // namespace gexpect
