#include "gexpect/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gexpect/errors.hpp"

namespace gexpect {

std::vector<double> evaluate_on_support(const MeasureFamily& fam,
                                        const RealFunction& f) {
  std::vector<double> values(fam.support_size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = f(fam.support()[i]);
    if (!std::isfinite(values[i]))
      throw DomainError("payoff is not finite on the support");
  }
  return values;
}

double upper_expectation_values(const MeasureFamily& fam,
                                const std::vector<double>& values) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : fam.probs()) {
    double e = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) e += p[i] * values[i];
    best = std::max(best, e);
  }
  return best;
}

double conjugate_expectation_values(const MeasureFamily& fam,
                                    const std::vector<double>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : fam.probs()) {
    double e = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) e += p[i] * values[i];
    best = std::min(best, e);
  }
  return best;
}

std::size_t argmax_law(const MeasureFamily& fam,
                       const std::vector<double>& values) {
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < fam.law_count(); ++k) {
    double e = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      e += fam.probs()[k][i] * values[i];
    if (e > best) {  // strict: first law keeps ties
      best = e;
      arg = k;
    }
  }
  return arg;
}

double upper_expectation(const MeasureFamily& fam, const RealFunction& f) {
  return upper_expectation_values(fam, evaluate_on_support(fam, f));
}

double conjugate_expectation(const MeasureFamily& fam, const RealFunction& f) {
  return conjugate_expectation_values(fam, evaluate_on_support(fam, f));
}

CapacityPair capacity(const MeasureFamily& fam, const EventPredicate& event) {
  std::vector<double> ind(fam.support_size());
  std::vector<double> ind_comp(fam.support_size());
  for (std::size_t i = 0; i < ind.size(); ++i) {
    const bool in = event(fam.support()[i]);
    ind[i] = in ? 1.0 : 0.0;
    ind_comp[i] = in ? 0.0 : 1.0;
  }
  CapacityPair pair;
  pair.upper = upper_expectation_values(fam, ind);
  pair.lower = 1.0 - upper_expectation_values(fam, ind_comp);
  return pair;
}

double choquet_integral(const MeasureFamily& fam, const RealFunction& f,
                        Envelope which) {
  const std::vector<double> values = evaluate_on_support(fam, f);
  std::vector<double> levels = values;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  auto cap_at_level = [&](double level) {
    // V(f >= level) or v(f >= level)
    std::vector<double> ind(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      ind[i] = values[i] >= level ? 1.0 : 0.0;
    if (which == Envelope::Upper) return upper_expectation_values(fam, ind);
    std::vector<double> comp(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) comp[i] = 1.0 - ind[i];
    return 1.0 - upper_expectation_values(fam, comp);
  };

  // On (levels[j-1], levels[j]] the set {f >= t} equals {f >= levels[j]},
  // so both tails reduce to finite sums of capacity * interval length.
  double integral = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const double hi = levels[j];
    const double lo = (j == 0) ? -std::numeric_limits<double>::infinity()
                               : levels[j - 1];
    const double cap = cap_at_level(hi);
    // positive part: overlap of (lo, hi] with (0, inf)
    const double pos_lo = std::max(lo, 0.0);
    if (hi > pos_lo) integral += cap * (hi - pos_lo);
    // negative part: overlap with (-inf, 0]; integrand is cap - 1, which
    // vanishes on the unbounded first interval where the event is certain
    const double neg_hi = std::min(hi, 0.0);
    if (std::isfinite(lo)) {
      if (neg_hi > lo) integral += (cap - 1.0) * (neg_hi - lo);
    }
    // j == 0: cap = 1 there (every support point satisfies f >= min), so
    // the (-inf, levels[0]] piece contributes 0 exactly.
  }
  // above the top level the event is empty: the positive tail vanishes and
  // the negative overlap (levels.back(), 0] integrates cap - 1 = -1
  if (levels.back() < 0.0) integral += levels.back();
  return integral;
}

AxiomReport verify_axioms(const MeasureFamily& fam,
                          const std::vector<RealFunction>& fns,
                          double tolerance) {
  if (fns.empty()) throw ConfigError("verify_axioms: need at least one function");
  AxiomReport rep;

  std::vector<std::vector<double>> tables;
  tables.reserve(fns.size());
  for (const auto& f : fns) tables.push_back(evaluate_on_support(fam, f));

  const std::size_t m = fam.support_size();
  for (const double c : {-1.0, 0.0, 1.0, 3.141592653589793}) {
    const std::vector<double> cv(m, c);
    rep.constant_preserving = std::max(
        rep.constant_preserving, std::fabs(upper_expectation_values(fam, cv) - c));
  }

  for (std::size_t a = 0; a < tables.size(); ++a) {
    const auto& fa = tables[a];
    const double ea = upper_expectation_values(fam, fa);

    for (const double lam : {0.0, 0.5, 2.0, 3.75}) {
      std::vector<double> scaled(m);
      for (std::size_t i = 0; i < m; ++i) scaled[i] = lam * fa[i];
      rep.positive_homogeneity =
          std::max(rep.positive_homogeneity,
                   std::fabs(upper_expectation_values(fam, scaled) - lam * ea));
    }

    for (std::size_t b = 0; b < tables.size(); ++b) {
      const auto& fb = tables[b];
      std::vector<double> fmax(m), fsum(m);
      for (std::size_t i = 0; i < m; ++i) {
        fmax[i] = std::max(fa[i], fb[i]);
        fsum[i] = fa[i] + fb[i];
      }
      rep.monotonicity = std::max(
          rep.monotonicity, ea - upper_expectation_values(fam, fmax));
      rep.sub_additivity =
          std::max(rep.sub_additivity,
                   upper_expectation_values(fam, fsum) - ea -
                       upper_expectation_values(fam, fb));
    }
  }

  // duality on threshold events through every support point
  for (const double t : fam.support()) {
    for (int mode = 0; mode < 2; ++mode) {
      EventPredicate ev = mode == 0
          ? EventPredicate([t](double x) { return x >= t; })
          : EventPredicate([t](double x) { return std::fabs(x) >= std::fabs(t); });
      const CapacityPair cp = capacity(fam, ev);
      std::vector<double> ind(m);
      for (std::size_t i = 0; i < m; ++i)
        ind[i] = ev(fam.support()[i]) ? 1.0 : 0.0;
      const double v_direct = conjugate_expectation_values(fam, ind);
      rep.capacity_duality =
          std::max(rep.capacity_duality, std::fabs(cp.lower - v_direct));
      rep.capacity_duality =
          std::max(rep.capacity_duality, std::max(0.0, cp.lower - cp.upper));
    }
  }

  rep.max_violation = std::max({rep.monotonicity, rep.constant_preserving,
                                rep.sub_additivity, rep.positive_homogeneity,
                                rep.capacity_duality});
  rep.pass = rep.max_violation <= tolerance;
  return rep;
}

}  // namespace gexpect
