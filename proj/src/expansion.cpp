#include "gexpect/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "gexpect/errors.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

namespace {
MeasureFamily transform_support(const MeasureFamily& fam,
                                const std::function<double(double)>& t) {
  std::vector<std::vector<DiscreteLaw::Atom>> law_atoms;
  for (const auto& p : fam.probs()) {
    std::vector<DiscreteLaw::Atom> atoms;
    for (std::size_t i = 0; i < fam.support_size(); ++i)
      atoms.push_back({t(fam.support()[i]), p[i]});
    law_atoms.push_back(std::move(atoms));
  }
  return MeasureFamily::from_atom_lists(law_atoms, fam.name());
}
}  // namespace

MeasureFamily shift_support(const MeasureFamily& fam, double delta) {
  return transform_support(fam, [delta](double v) { return v + delta; });
}

MeasureFamily scale_support(const MeasureFamily& fam, double factor) {
  return transform_support(fam, [factor](double v) { return v * factor; });
}

ExpansionBound moment_expansion_bound(const MeasureFamily& xi, double b,
                                      double lambda, double theta,
                                      ExpansionForm form) {
  if (!(b > 0.0)) throw DomainError("expansion bound: need b > 0");
  if (!(theta > 0.0)) throw DomainError("expansion bound: need theta > 0");

  const double coeff = lambda * lambda / 2.0 - theta;
  const double coeff_pos = std::max(coeff, 0.0);
  const double coeff_neg = std::max(-coeff, 0.0);
  const double peak = std::exp(lambda * lambda / (4.0 * theta));

  ExpansionBound out;
  out.exact = upper_expectation(xi, [&](double v) {
    const double s = b * v;
    return std::exp(lambda * s - theta * s * s);
  });

  double main, remainder;
  if (form == ExpansionForm::Truncated) {
    const double m_up = upper_expectation(
        xi, [b](double v) { return std::min(b * v * b * v, 1.0); });
    const double m_lo = conjugate_expectation(
        xi, [b](double v) { return std::min(b * v * b * v, 1.0); });
    main = 1.0 + coeff_pos * m_up - coeff_neg * m_lo;
    const double k_const = 0.5 * std::pow(theta, 1.5) * peak +
                           std::fabs(lambda) + peak;
    const double cube = upper_expectation(xi, [b](double v) {
      return std::min(std::pow(std::fabs(b * v), 3.0), 1.0);
    });
    const double excess = upper_expectation(xi, [b](double v) {
      return std::max(std::fabs(b * v) - 1.0, 0.0);
    });
    const double tail =
        capacity(xi, [b](double v) { return std::fabs(b * v) > 1.0; }).upper;
    remainder = k_const * (cube + excess + tail);
  } else {
    const double m2_up = upper_expectation(xi, [](double v) { return v * v; });
    const double m2_lo = conjugate_expectation(xi, [](double v) { return v * v; });
    main = 1.0 + b * b * (coeff_pos * m2_up - coeff_neg * m2_lo);
    const double k_const = 0.5 * std::pow(theta, 1.5) * peak +
                           2.0 * std::exp(-1.5) * theta * peak;
    const double mixed = upper_expectation(xi, [b](double v) {
      const double s = std::fabs(b * v);
      return std::min(s * s * s, s * s);
    });
    remainder = k_const * mixed;
  }

  out.main_term = main;
  out.remainder = remainder;
  out.upper = main + remainder;
  out.lower = main - remainder;

  // sign hypotheses, with room for rounding in centered supports
  double scale = 1.0;
  for (const double v : xi.support()) scale = std::max(scale, std::fabs(v));
  const double eps = 1e-12 * scale;
  const double mean_up = upper_expectation(xi, [](double v) { return v; });
  const double mean_lo = conjugate_expectation(xi, [](double v) { return v; });
  out.upper_valid = (lambda >= 0.0 && mean_up <= eps) ||
                    (lambda <= 0.0 && mean_lo >= -eps);
  out.lower_valid = (lambda >= 0.0 && mean_lo >= -eps) ||
                    (lambda <= 0.0 && mean_up <= eps);
  return out;
}

ExpQuadraticValue exp_quadratic_value(const MomentProfile& profile, int n,
                                      double x_n, double lambda, double theta,
                                      ExpQuadScale scale,
                                      std::size_t state_budget) {
  if (n < 1) throw DomainError("exp_quadratic_value: need n >= 1");
  if (!std::isfinite(lambda) || !std::isfinite(theta))
    throw DomainError("exp_quadratic_value: lambda/theta must be finite");

  const TruncationPoint tp = profile.solve_zn(n, x_n);
  const double z = tp.z_n;
  const double coeff = lambda * lambda / 2.0 - theta;

  bool use_upper_scale;
  switch (scale) {
    case ExpQuadScale::Upper: use_upper_scale = true; break;
    case ExpQuadScale::ConjugateScaled: use_upper_scale = false; break;
    default: use_upper_scale = coeff >= 0.0; break;
  }
  double b = 1.0 / z;
  if (!use_upper_scale) {
    const double lu = profile.truncated_moment(z, Envelope::Upper);
    const double lc = profile.truncated_moment(z, Envelope::Lower);
    if (!(lc > 0.0))
      throw ConfigError("conjugate truncated moment vanishes; scale undefined");
    b = (1.0 / z) * (lu / lc);
  }

  ExpQuadraticValue out;
  out.b = b;
  out.z_n = z;
  out.z_at_boundary = tp.at_boundary;
  const double lb = lambda * b;
  const double tb2 = theta * b * b;
  out.log_exact = adversarial_log_expectation_sv(
      profile.family(), n,
      [lb, tb2](double s, double v2) { return lb * s - tb2 * v2; },
      state_budget);
  out.log_predicted = coeff * x_n * x_n;
  out.log_ratio = out.log_exact - out.log_predicted;
  return out;
}

}  // namespace gexpect
