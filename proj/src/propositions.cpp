#include "gexpect/propositions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gexpect/bounds.hpp"
#include "gexpect/errors.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

namespace {

double get_param(const std::map<std::string, double>& params,
                 const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw DomainError("missing bound parameter: " + key);
  return it->second;
}

double log_sum_exp2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

std::string bound_id_name(BoundId id) {
  switch (id) {
    case BoundId::BIneq1: return "BIneq1";
    case BoundId::BIneq2: return "BIneq2";
    case BoundId::BIneq3: return "BIneq3";
    case BoundId::Prop1: return "Prop1";
    case BoundId::Prop2: return "Prop2";
    case BoundId::Prop3: return "Prop3";
    case BoundId::Prop4: return "Prop4";
    case BoundId::Prop6_1: return "Prop6.1";
    case BoundId::Prop6_2: return "Prop6.2";
    case BoundId::Prop6_3: return "Prop6.3";
    case BoundId::MomentG1Upper: return "MomentG1-upper";
    case BoundId::MomentG1Lower: return "MomentG1-lower";
    case BoundId::Lem6_1Upper: return "Lem6.1-upper";
    case BoundId::Lem6_1Lower: return "Lem6.1-lower";
    case BoundId::MomentG2Upper: return "MomentG2-upper";
    case BoundId::Lem6_2a: return "Lem6.2a";
    case BoundId::Lem6_2b: return "Lem6.2b";
    case BoundId::Lem6_2c: return "Lem6.2c";
  }
  return "unknown";
}

PropositionValue proposition_bound(BoundId id,
                                   const std::map<std::string, double>& params) {
  PropositionValue out;
  out.asymptotic_only = true;
  switch (id) {
    case BoundId::BIneq1:
    case BoundId::BIneq2:
    case BoundId::BIneq3: {
      const int variant = id == BoundId::BIneq1 ? 1 : id == BoundId::BIneq2 ? 2 : 3;
      const BernsteinBound b = bernstein_bound(
          variant, get_param(params, "x"), get_param(params, "a"),
          get_param(params, "var_sum"));
      out.log_bound = b.log_value;
      out.asymptotic_only = false;
      return out;
    }
    case BoundId::Prop1: {
      const double x = get_param(params, "x");
      out.log_bound = -x * x;
      out.note = "remainder envelope excluded; trend-tested only";
      return out;
    }
    case BoundId::Prop2: {
      const double x = get_param(params, "x");
      const double delta = get_param(params, "delta");
      if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("Prop2: delta in (0,1)");
      out.log_bound = -0.5 * x * x;
      out.note = "remainder envelope excluded; trend-tested only";
      return out;
    }
    case BoundId::Prop3: {
      const double x = get_param(params, "x");
      const double delta = get_param(params, "delta");
      const double r_sq = get_param(params, "r_sq");
      if (!(r_sq >= 1.0)) throw DomainError("Prop3: r_sq >= 1");
      if (!(delta > 0.0 && delta < 1.0 / r_sq))
        throw DomainError("Prop3: delta in (0, 1/r_sq)");
      out.log_bound = -2.0 * x * x;
      out.note = "valid for n large enough";
      return out;
    }
    case BoundId::Prop4: {
      const double x = get_param(params, "x");
      const double beta = get_param(params, "beta");
      if (!(beta > 0.0 && beta < 1.0))
        throw DomainError("Prop4: beta in the open interval (0,1)");
      const double c = 1.0 + beta / 4.0;
      out.log_bound = -0.5 * c * c * x * x;
      out.note = "liminf target for the eta event";
      return out;
    }
    case BoundId::Prop6_1: {
      const double x = get_param(params, "x");
      if (!(x >= 2.0)) throw DomainError("Prop6.1: x >= 2");
      const double delta_nx = get_param(params, "delta_nx");
      const double c_env = get_param(params, "C");
      out.log_bound = std::log(2.0) - x * x + c_env * x * x * delta_nx;
      out.note = "envelope constant supplied by caller";
      return out;
    }
    case BoundId::Prop6_2: {
      const double x = get_param(params, "x");
      const double q = get_param(params, "q");
      const double delta = get_param(params, "delta");
      if (!(x >= 2.0)) throw DomainError("Prop6.2: x >= 2");
      if (!(q >= 1.0)) throw DomainError("Prop6.2: q >= 1");
      if (!(delta > 0.0 && delta <= 0.25 / q))
        throw DomainError("Prop6.2: delta in (0, 1/(4q)]");
      out.log_bound = -2.0 * x * x +
                      get_param(params, "C") * q * q * q * x * x *
                          get_param(params, "delta_nx");
      return out;
    }
    case BoundId::Prop6_3: {
      const double x = get_param(params, "x");
      const double q = get_param(params, "q");
      if (!(x >= 2.0)) throw DomainError("Prop6.3: x >= 2");
      if (!(q >= 1.0)) throw DomainError("Prop6.3: q >= 1");
      out.log_bound = -0.5 * x * x +
                      get_param(params, "C") * std::pow(q, 1.5) *
                          (std::log(x) +
                           x * x * get_param(params, "delta_nx"));
      return out;
    }
    case BoundId::MomentG2Upper: {
      const double x = get_param(params, "x");
      const double lambda = get_param(params, "lambda");
      const double theta = get_param(params, "theta");
      out.log_bound = (lambda * lambda / 2.0 - theta) * x * x +
                      get_param(params, "C") * x * x;
      return out;
    }
    case BoundId::Lem6_2a:
    case BoundId::Lem6_2b:
    case BoundId::Lem6_2c: {
      const double x = get_param(params, "x");
      const double lambda = get_param(params, "lambda");
      const double theta = get_param(params, "theta");
      const double delta_nx = get_param(params, "delta_nx");
      const double c_env = get_param(params, "C");
      if (!(x >= 2.0)) throw DomainError("Lem6.2: x >= 2");
      const double coeff = lambda * lambda / 2.0 - theta;
      if (id == BoundId::Lem6_2a) {
        if (coeff < 0.0) throw DomainError("Lem6.2a: needs lambda^2/2 >= theta");
        out.log_bound = coeff * x * x + c_env * x * x * delta_nx;
      } else if (id == BoundId::Lem6_2b) {
        if (coeff >= 0.0) throw DomainError("Lem6.2b: needs lambda^2/2 < theta");
        const double q = get_param(params, "q");
        out.log_bound = coeff * x * x + c_env * q * q * q * x * x * delta_nx;
      } else {
        if (!(coeff > 0.0)) throw DomainError("Lem6.2c: needs lambda^2/2 > theta");
        out.log_bound = coeff * x * x - c_env * x * x * delta_nx;
        out.note = "lower form";
      }
      return out;
    }
    case BoundId::MomentG1Upper:
    case BoundId::MomentG1Lower:
    case BoundId::Lem6_1Upper:
    case BoundId::Lem6_1Lower:
      throw DomainError(
          "one-step expansion forms need a family: use moment_expansion_bound");
  }
  throw DomainError("unknown bound id");
}

double prop61_second_term_log_bound(double x, double t, double a0) {
  if (!(x >= 2.0)) throw DomainError("second-term bound: x >= 2");
  if (!(t > 0.0) || !(a0 > 0.0)) throw DomainError("second-term bound: t, A0 > 0");
  return -t * x * x / 4.0 + 4.0 * std::exp(t) * x * x / (a0 * a0);
}

double prop61_second_term_exact(const MeasureFamily& fam, int n, double x,
                                double a0, std::size_t state_budget) {
  if (n < 1) throw DomainError("need n >= 1");
  const double b_bar_sq =
      static_cast<double>(n) * upper_expectation(fam, [](double v) { return v * v; });
  if (!(b_bar_sq > 0.0)) throw ConfigError("second-term: zero upper variance sum");
  const double b = x / std::sqrt(b_bar_sq);

  // collapse each law to the exceedance indicator; the count is the only
  // statistic the payoff sees, so the nested value is unchanged
  std::vector<std::vector<DiscreteLaw::Atom>> law_atoms;
  for (const auto& p : fam.probs()) {
    double q = 0.0;
    for (std::size_t i = 0; i < fam.support_size(); ++i)
      if (b * fam.support()[i] > a0) q += p[i];
    law_atoms.push_back({{0.0, 1.0 - q}, {1.0, q}});
  }
  const MeasureFamily indicator_fam = MeasureFamily::from_atom_lists(law_atoms);
  const double threshold = x * x / 4.0;
  return adversarial_value_sv(
      indicator_fam, n,
      [threshold](double s, double) { return s >= threshold ? 1.0 : 0.0; },
      state_budget);
}

MdUpperBound md_combined_upper_bound(const MomentProfile& profile, int n,
                                     double x_n, std::size_t state_budget) {
  if (n < 1) throw DomainError("md upper bound: need n >= 1");
  if (!(x_n > 0.0)) throw DomainError("md upper bound: need x_n > 0");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  MdUpperBound out;
  if (profile.degenerate()) {
    out.log_total = 0.0;  // trivial bound: capacity <= 1
    out.log_large_trunc = out.log_large_count = out.log_middle = out.log_small = 0.0;
    out.delta = 0.0;
    out.z_n = 1.0;
    out.z_at_boundary = true;
    return out;
  }

  const TruncationPoint tp = profile.solve_zn(n, x_n);
  const double z = tp.z_n;
  const double nl = static_cast<double>(n) * profile.truncated_moment(z, Envelope::Upper);
  const double nlc = static_cast<double>(n) * profile.truncated_moment(z, Envelope::Lower);
  const MeasureFamily& fam = profile.family();
  out.z_n = z;
  out.z_at_boundary = tp.at_boundary;

  // ---- small-V^2 piece: V_n^2 <= delta n l(z) -------------------------
  // Y_i = conjE[X^2 ^ z^2] - X_i^2 ^ z^2 has upper mean zero, |Y_i| <= z^2.
  double log_small = 0.0;
  double delta = 0.25;
  if (nlc > 0.0) {
    delta = std::min(0.9, 0.5 * nlc / nl);
    const double x_small = nlc - delta * nl;
    const double lc = nlc / static_cast<double>(n);
    const double y_sq = upper_expectation(fam, [lc, z](double v) {
      const double w = lc - std::min(v * v, z * z);
      return w * w;
    });
    const double b2 = static_cast<double>(n) * y_sq;
    const double a = z * z;
    log_small = -x_small * x_small / (2.0 * (b2 + 2.0 * a * x_small));
  }
  out.delta = delta;
  out.log_small = log_small;

  // ---- large-V^2 piece: V_n^2 >= 9 n l(z) ------------------------------
  // truncated-sum subevent at scale 1/z
  const double one_step = upper_expectation(
      fam, [z](double v) { return std::exp(std::clamp(v, -z, z) / z); });
  out.log_large_trunc = -1.5 * x_n * std::sqrt(nl) / z +
                        static_cast<double>(n) * std::log(one_step);
  // exceedance-count subevent, optimized over the free multiplier
  const double v_half =
      capacity(fam, [z](double v) { return std::fabs(v) > 0.5 * z; }).upper;
  double log_count = 0.0;
  bool first = true;
  for (int t = 1; t <= 12; ++t) {
    const double cand =
        -static_cast<double>(t) * x_n * x_n / 4.0 +
        static_cast<double>(n) * std::log1p((std::exp(t) - 1.0) * v_half);
    if (first || cand < log_count) log_count = cand;
    first = false;
  }
  out.log_large_count = log_count;

  // ---- middle piece: dyadic cover of a = x/V over the V^2 window -------
  // the exponent is a sum over coordinates, so the nested expectation
  // factorizes into exact one-step products: no state budget involved
  (void)state_budget;
  const double b = 1.0 / z;
  const double theta = std::sqrt(1.0 + 1.0 / x_n);
  const double log_theta = std::log(theta);
  const double a_min = x_n / std::sqrt(9.0 * nl);
  const double a_max = x_n / std::sqrt(delta * nl);
  const long j_lo = static_cast<long>(std::floor(std::log(a_min / b) / log_theta));
  const long j_hi = static_cast<long>(std::ceil(std::log(a_max / b) / log_theta));
  double log_middle = kNegInf;
  for (long j = j_lo; j < std::max(j_hi, j_lo + 1); ++j) {
    const double hi_scale = std::pow(theta, static_cast<double>(j + 1)) * b;
    const double lo_scale = std::pow(theta, static_cast<double>(j)) * b;
    const double one_step_e = upper_expectation(fam, [&](double v) {
      return std::exp(hi_scale * v - 0.5 * lo_scale * lo_scale * v * v);
    });
    const double log_e = static_cast<double>(n) * std::log(one_step_e);
    log_middle = log_sum_exp2(log_middle, -0.5 * x_n * x_n + log_e);
  }
  out.log_middle = log_middle;

  double total = log_sum_exp2(out.log_large_trunc, out.log_large_count);
  total = log_sum_exp2(total, out.log_middle);
  total = log_sum_exp2(total, out.log_small);
  out.log_total = std::min(0.0, total);
  return out;
}

}  // namespace gexpect
