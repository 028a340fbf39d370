#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gexpect/bounds.hpp"
#include "gexpect/certification.hpp"
#include "gexpect/errors.hpp"
#include "gexpect/expansion.hpp"
#include "gexpect/heterogeneous.hpp"
#include "gexpect/propositions.hpp"
#include "gexpect/sublinear.hpp"

using namespace gexpect;

TEST_CASE("variant-1 closed form") {
  // exponent -> 0 as the threshold vanishes
  CHECK(bernstein_bound(1, 1e-12, 1.0, 4.0).value == doctest::Approx(1.0).epsilon(1e-9));
  const BernsteinBound b = bernstein_bound(1, 2.0, 1.0, 4.0);
  CHECK(b.value == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
  CHECK(b.prefactor == 1.0);
  CHECK_THROWS_AS(bernstein_bound(1, -1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bernstein_bound(1, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bernstein_bound(1, 1.0, 1.0, -2.0), DomainError);
  CHECK_THROWS_AS(bernstein_bound(4, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("variant 2 carries the prefactor and the translate") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const double shift = bernstein_v2_shift(rvf, 5);
  CHECK(shift == doctest::Approx(0.0));  // both means vanish
  const BernsteinBound b = bernstein_bound(2, 2.0, 1.0, 4.0, shift);
  CHECK(b.prefactor == 4.0);
  CHECK(b.value == doctest::Approx(4.0 * std::exp(-0.25)).epsilon(1e-14));
  CHECK(b.threshold_shift == shift);
}

TEST_CASE("four-step classical tail sits under the bound") {
  // P(S_4 >= 2) = 5/16 for the symmetric one-law family
  const MeasureFamily fam = MeasureFamily::rademacher();
  const double cap = adversarial_value_sv(
      fam, 4, [](double s, double) { return s >= 2.0 ? 1.0 : 0.0; });
  CHECK(cap == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
  CHECK(cap <= bernstein_bound(1, 2.0, 1.0, 4.0).value);
}

TEST_CASE("classical battery: DP == binomial enumeration <= bound") {
  const auto checks = classical_bernstein_battery(12);
  CHECK(checks.size() == 44);
  for (const BinomialCheck& c : checks) {
    CHECK(std::fabs(c.dp_tail - c.exact_tail) <= 1e-12);
    CHECK(c.exact_tail <= c.bound + 1e-12);
    CHECK(c.ok);
  }
}

TEST_CASE("maximal inequality factor") {
  const MaximalFactor one = maximal_factor_check(MeasureFamily::rademacher(), 1, 0.7);
  CHECK(one.lhs == doctest::Approx(one.rhs).epsilon(1e-12));
  CHECK(one.ok);

  const MaximalFactor four = maximal_factor_check(MeasureFamily::rademacher(), 4, 0.5);
  CHECK(four.ok);
  CHECK(four.lhs <= 4.0 * four.rhs + 1e-12);
  CHECK(four.lhs >= four.rhs - 1e-12);  // the max dominates the endpoint

  const MaximalFactor rvf = maximal_factor_check(MeasureFamily::rademacher_volatility(), 3, 1.0);
  CHECK(rvf.ok);
}

TEST_CASE("running-max engine matches the naive recursion") {
  RandomStream rs(29, 0);
  for (int rep = 0; rep < 8; ++rep) {
    const double p = 0.2 + 0.6 * rs.next_uniform();
    const MeasureFamily fam = MeasureFamily::from_atom_lists(
        {{{-1.0, p}, {0.5, 1.0 - p}}, {{-0.5, 0.4}, {1.0, 0.6}}});
    const int n = 2 + rep % 4;
    const double shift = -0.2 + 0.4 * rs.next_uniform();
    const double c = 0.3 + rs.next_uniform();
    const double engine = adversarial_value_runmax(
        fam, n, shift,
        [c](double, double m) { return m >= c ? 1.0 : 0.0; });
    // tree recursion carrying (sum, runmax) explicitly
    std::function<double(int, double, double)> go = [&](int depth, double sum,
                                                        double runmax) -> double {
      if (depth == n) return runmax >= c ? 1.0 : 0.0;
      double best = -1e300;
      for (std::size_t k = 0; k < fam.law_count(); ++k) {
        double e = 0.0;
        for (std::size_t o = 0; o < fam.support_size(); ++o) {
          const double s2 = sum + fam.support()[o] + shift;
          e += fam.probs()[k][o] * go(depth + 1, s2, std::max(runmax, s2));
        }
        best = std::max(best, e);
      }
      return best;
    };
    CHECK(engine == doctest::Approx(go(0, 0.0, -1e300)).epsilon(1e-12));
  }
}

TEST_CASE("conjugate-scaled truncation exceeds the plain reciprocal") {
  const MomentProfile prof{MeasureFamily::rademacher_volatility()};
  const ExpQuadraticValue plain =
      exp_quadratic_value(prof, 16, 2.0, 1.0, 0.2, ExpQuadScale::Upper);
  const ExpQuadraticValue scaled =
      exp_quadratic_value(prof, 16, 2.0, 1.0, 0.2, ExpQuadScale::ConjugateScaled);
  CHECK(plain.b == doctest::Approx(1.0 / plain.z_n));
  // ratio of truncated moments at z = 10 is 4: the scale quadruples
  CHECK(scaled.b == doctest::Approx(4.0 / scaled.z_n));
  // negative quadratic coefficient routes to the conjugate scale on its own
  const ExpQuadraticValue auto_pick = exp_quadratic_value(prof, 16, 2.0, 0.5, 1.0);
  CHECK(auto_pick.b == doctest::Approx(4.0 / auto_pick.z_n));
}

TEST_CASE("one-step expansion bounds") {
  // xi identically zero: both sides collapse to 1
  const MeasureFamily zero = MeasureFamily::from_atom_lists({{{0.0, 1.0}}});
  const ExpansionBound eb0 =
      moment_expansion_bound(zero, 0.5, 1.0, 1.0, ExpansionForm::Truncated);
  CHECK(eb0.exact == doctest::Approx(1.0));
  CHECK(eb0.main_term == doctest::Approx(1.0));
  CHECK(eb0.remainder == doctest::Approx(0.0));

  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const ExpansionBound eb =
      moment_expansion_bound(rvf, 0.1, 1.0, 1.0, ExpansionForm::Truncated);
  CHECK(eb.upper_valid);  // symmetric: upper mean is zero
  CHECK(eb.exact <= eb.upper + 1e-12);

  // lambda = 0: exp{-theta s^2} <= 1, and the bound keeps that direction
  const ExpansionBound flat =
      moment_expansion_bound(rvf, 0.3, 0.0, 0.8, ExpansionForm::Truncated);
  CHECK(flat.exact <= 1.0 + 1e-12);
  CHECK(flat.exact <= flat.upper + 1e-12);
  CHECK(flat.lower <= flat.exact + 1e-12);

  const ExpansionBound raw =
      moment_expansion_bound(rvf, 0.1, 1.0, 1.0, ExpansionForm::Raw);
  CHECK(raw.exact <= raw.upper + 1e-12);

  CHECK_THROWS_AS(moment_expansion_bound(rvf, 0.0, 1.0, 1.0, ExpansionForm::Raw),
                  DomainError);
  CHECK_THROWS_AS(moment_expansion_bound(rvf, 0.1, 1.0, 0.0, ExpansionForm::Raw),
                  DomainError);
}

TEST_CASE("exponential-quadratic value: degenerate exponent") {
  const MomentProfile prof{MeasureFamily::rademacher_volatility()};
  const ExpQuadraticValue v = exp_quadratic_value(prof, 6, 1.2, 0.0, 0.0);
  CHECK(v.log_exact == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.log_predicted == doctest::Approx(0.0));
}

TEST_CASE("exponential-quadratic value: classical product of cosh") {
  const MomentProfile prof{MeasureFamily::rademacher()};
  const int n = 16;
  const double x = 1.5;
  const double lambda = 0.8;
  const ExpQuadraticValue v = exp_quadratic_value(prof, n, x, lambda, 0.0);
  // z = sqrt(n)/x for the unit symmetric law
  CHECK(v.z_n == doctest::Approx(std::sqrt(16.0) / 1.5).epsilon(1e-10));
  const double expected = n * std::log(std::cosh(lambda / v.z_n));
  CHECK(v.log_exact == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("separable exponents factorize into one-step products") {
  // the state DP and the product of one-step upper expectations are two
  // routes to the same nested value; they must agree to rounding
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  for (const int n : {3, 6, 10}) {
    for (const double lambda : {0.4, 1.0}) {
      for (const double theta : {0.0, 0.3}) {
        const double dp = adversarial_log_expectation_sv(
            rvf, n, [lambda, theta](double s, double v2) {
              return lambda * s - theta * v2;
            });
        const double one_step = upper_expectation(rvf, [&](double v) {
          return std::exp(lambda * v - theta * v * v);
        });
        CHECK(dp == doctest::Approx(n * std::log(one_step)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("exponential-quadratic log-ratio shrinks along n") {
  const MomentProfile prof{MeasureFamily::rademacher_volatility()};
  double prev = 1e300;
  for (const int n : {8, 16, 24}) {
    const double x = std::pow(static_cast<double>(n), 0.3);
    const ExpQuadraticValue v = exp_quadratic_value(prof, n, x, 1.0, 0.5);
    const double normalized = std::fabs(v.log_ratio) / (x * x);
    CHECK(normalized <= prev + 1e-12);
    prev = normalized;
  }
}

TEST_CASE("heterogeneous aggregates for the identical four-term array") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const std::vector<MeasureFamily> array(4, rvf);
  const HeterogeneousMoments mom = heterogeneous_delta(array, 2.0);
  CHECK(mom.b_bar_sq == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(mom.b_under_sq == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mom.q == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mom.delta == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("deterministic-zero index adds nothing") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const MeasureFamily zero = MeasureFamily::from_atom_lists({{{0.0, 1.0}}});
  const std::vector<MeasureFamily> with{rvf, zero, rvf};
  const std::vector<MeasureFamily> without{rvf, rvf};
  const HeterogeneousMoments a = heterogeneous_delta(with, 2.0);
  const HeterogeneousMoments b = heterogeneous_delta(without, 2.0);
  CHECK(a.b_bar_sq == doctest::Approx(b.b_bar_sq));
  CHECK(a.b_under_sq == doctest::Approx(b.b_under_sq));
}

TEST_CASE("delta vanishes along n for bounded arrays") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  double prev = 1e300;
  for (const int n : {4, 16, 64, 256}) {
    const std::vector<MeasureFamily> array(static_cast<std::size_t>(n), rvf);
    const HeterogeneousMoments mom = heterogeneous_delta(array, 2.0);
    CHECK(mom.delta < prev);
    prev = mom.delta;
  }
  CHECK(prev < 0.3);
}

TEST_CASE("degenerate array rejected") {
  const MeasureFamily zero = MeasureFamily::from_atom_lists({{{0.0, 1.0}}});
  const std::vector<MeasureFamily> array(3, zero);
  CHECK_THROWS_AS(heterogeneous_delta(array, 2.0), ConfigError);
}

TEST_CASE("proposition face values") {
  const PropositionValue p3 =
      proposition_bound(BoundId::Prop3, {{"x", 2.0}, {"delta", 0.1}, {"r_sq", 4.0}});
  CHECK(p3.log_bound == doctest::Approx(-8.0));
  CHECK(p3.asymptotic_only);
  CHECK_THROWS_AS(
      proposition_bound(BoundId::Prop3, {{"x", 2.0}, {"delta", 0.3}, {"r_sq", 4.0}}),
      DomainError);

  CHECK_THROWS_AS(proposition_bound(BoundId::Prop4, {{"x", 2.0}, {"beta", 0.0}}),
                  DomainError);
  CHECK_THROWS_AS(proposition_bound(BoundId::Prop4, {{"x", 2.0}, {"beta", 1.0}}),
                  DomainError);
  const PropositionValue p4 =
      proposition_bound(BoundId::Prop4, {{"x", 1.0}, {"beta", 0.5}});
  CHECK(p4.log_bound == doctest::Approx(-0.5 * 1.125 * 1.125));

  // the fixed multiplier/threshold pair keeps the count-event tail under e^{-x^2}
  for (const double x : {2.0, 2.5, 3.0, 4.0})
    CHECK(prop61_second_term_log_bound(x) <= -x * x + 1e-12);
  CHECK_THROWS_AS(prop61_second_term_log_bound(1.0), DomainError);
}

TEST_CASE("certification sweep has zero violations") {
  SweepConfig cfg;
  cfg.config_count = 60;  // acceptance runs the full 200
  const SweepResult res = run_certification_sweep(cfg);
  CHECK(res.rows.size() > 500);
  CHECK(res.violations == 0);
  CHECK(res.min_slack >= -1e-10);
}

TEST_CASE("combined upper bound dominates the exact capacity") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const MomentProfile prof{rvf};
  for (const int n : {8, 12, 16}) {
    const double x = std::pow(static_cast<double>(n), 0.3);
    const MdUpperBound ub = md_combined_upper_bound(prof, n, x);
    const double exact = adversarial_value_sv(rvf, n, [x](double s, double v2) {
      return s >= x * std::sqrt(v2) ? 1.0 : 0.0;
    });
    CHECK(std::log(exact) <= ub.log_total + 1e-9);
  }
}
