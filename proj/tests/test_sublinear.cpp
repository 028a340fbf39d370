#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "gexpect/adversarial.hpp"
#include "gexpect/discrete_law.hpp"
#include "gexpect/errors.hpp"
#include "gexpect/rng.hpp"
#include "gexpect/sublinear.hpp"
#include "gexpect/test_function.hpp"

using namespace gexpect;

namespace {

// plain nested recursion over histories; the adversary picks a law at every
// node. Independent of the library's state-space engines.
double naive_nested_value(const MeasureFamily& fam, int n,
                          const std::function<double(const std::vector<double>&)>& payoff) {
  std::vector<double> prefix;
  std::function<double(int)> go = [&](int depth) -> double {
    if (depth == n) return payoff(prefix);
    double best = -1e300;
    for (std::size_t k = 0; k < fam.law_count(); ++k) {
      double e = 0.0;
      for (std::size_t o = 0; o < fam.support_size(); ++o) {
        if (fam.probs()[k][o] == 0.0) continue;
        prefix.push_back(fam.support()[o]);
        e += fam.probs()[k][o] * go(depth + 1);
        prefix.pop_back();
      }
      best = std::max(best, e);
    }
    return best;
  };
  return go(0);
}

MeasureFamily small_biased_family() {
  return MeasureFamily::from_atom_lists(
      {{{-1.0, 0.5}, {1.0, 0.5}}, {{-1.0, 0.25}, {1.0, 0.75}}}, "biased");
}

}  // namespace

TEST_CASE("upper expectation basics on the volatility family") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  CHECK(upper_expectation(rvf, [](double) { return 2.5; }) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(upper_expectation(rvf, [](double x) { return x; }) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(upper_expectation(rvf, [](double x) { return x * x; }) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(conjugate_expectation(rvf, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single-law family reduces to the classical expectation") {
  const MeasureFamily one = MeasureFamily::from_atom_lists(
      {{{-1.0, 0.25}, {0.0, 0.25}, {2.0, 0.5}}});
  const double classical = -0.25 + 0.0 + 1.0;
  CHECK(upper_expectation(one, [](double x) { return x; }) == doctest::Approx(classical));
  CHECK(conjugate_expectation(one, [](double x) { return x; }) == doctest::Approx(classical));
}

TEST_CASE("conjugate never exceeds upper; equality iff law-independent") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  RandomStream rs(42, 0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> vals(rvf.support_size());
    for (auto& v : vals) v = rs.next_normal();
    CHECK(conjugate_expectation_values(rvf, vals) <=
          upper_expectation_values(rvf, vals) + 1e-14);
  }
  // x is symmetric under both laws: upper == conjugate
  CHECK(upper_expectation(rvf, [](double x) { return x; }) ==
        conjugate_expectation(rvf, [](double x) { return x; }));
}

TEST_CASE("family construction errors") {
  CHECK_THROWS_AS(MeasureFamily::from_laws({}), ConfigError);
  CHECK_THROWS_AS(
      DiscreteLaw::from_atoms({{0.0, 0.4}, {1.0, 0.4}}), DomainError);
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  CHECK_THROWS_AS(
      upper_expectation(rvf, [](double x) { return 1.0 / (x - 1.0); }),
      DomainError);
}

TEST_CASE("capacity pairs on threshold events") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const CapacityPair whole = capacity(rvf, [](double) { return true; });
  CHECK(whole.upper == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(whole.lower == doctest::Approx(1.0).epsilon(1e-15));

  const CapacityPair pos = capacity(rvf, [](double x) { return x > 0.0; });
  CHECK(pos.upper == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pos.lower == doctest::Approx(0.5).epsilon(1e-15));

  const CapacityPair big = capacity(rvf, [](double x) { return std::fabs(x) >= 2.0; });
  CHECK(big.upper == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(big.lower == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("capacity duality and ordering hold exactly") {
  RandomStream rs(7, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const double u = 0.2 * rs.next_uniform();
    const MeasureFamily fam = MeasureFamily::from_atom_lists(
        {{{-2.0, 0.3 + u}, {0.5, 0.2}, {1.0, 0.5 - u}},
         {{-2.0, 0.1}, {0.5, 0.6}, {1.0, 0.3}}});
    const double t = -2.0 + 4.0 * rs.next_uniform();
    const auto ev = [t](double x) { return x >= t; };
    const CapacityPair cp = capacity(fam, ev);
    CHECK(cp.lower <= cp.upper + 1e-15);
    // v(A) = 1 - V(A^c) against the direct conjugate of the indicator
    std::vector<double> ind(fam.support_size());
    for (std::size_t i = 0; i < ind.size(); ++i)
      ind[i] = ev(fam.support()[i]) ? 1.0 : 0.0;
    CHECK(cp.lower ==
          doctest::Approx(conjugate_expectation_values(fam, ind)).epsilon(1e-14));
  }
}

TEST_CASE("finite unions stay below capacity sums") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const std::vector<double> thresholds = {-2.0, -1.0, 1.0, 2.0};
  double sum = 0.0;
  for (const double t : thresholds)
    sum += capacity(rvf, [t](double x) { return x == t; }).upper;
  const double whole = capacity(rvf, [](double) { return true; }).upper;
  CHECK(whole <= sum + 1e-14);
}

TEST_CASE("choquet integral: indicators and the quadratic payoff") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const auto indicator = [](double x) { return std::fabs(x) >= 2.0 ? 1.0 : 0.0; };
  CHECK(choquet_integral(rvf, indicator, Envelope::Upper) ==
        doctest::Approx(capacity(rvf, [](double x) { return std::fabs(x) >= 2.0; }).upper)
            .epsilon(1e-15));
  CHECK(choquet_integral(rvf, [](double x) { return x * x; }, Envelope::Upper) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(choquet_integral(rvf, [](double x) { return x * x; }, Envelope::Lower) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("choquet integral matches a fine Riemann sum") {
  RandomStream rs(11, 0);
  const MeasureFamily fam = small_biased_family();
  for (int rep = 0; rep < 5; ++rep) {
    const double a = rs.next_normal();
    const double b = rs.next_normal();
    const auto f = [a, b](double x) { return a * x + b * x * x - 0.3; };
    for (const Envelope which : {Envelope::Upper, Envelope::Lower}) {
      double lo = 0.0, hi = 0.0;  // window must straddle zero for both tails
      for (const double v : fam.support()) {
        lo = std::min(lo, f(v));
        hi = std::max(hi, f(v));
      }
      const int steps = 200000;
      const double width = (hi - lo) + 2.0;
      double riemann = 0.0;
      for (int i = 0; i < steps; ++i) {
        const double t = lo - 1.0 + width * (i + 0.5) / steps;
        std::vector<double> ind(fam.support_size());
        for (std::size_t k = 0; k < ind.size(); ++k)
          ind[k] = f(fam.support()[k]) >= t ? 1.0 : 0.0;
        double cap;
        if (which == Envelope::Upper) {
          cap = upper_expectation_values(fam, ind);
        } else {
          std::vector<double> comp(ind.size());
          for (std::size_t k = 0; k < ind.size(); ++k) comp[k] = 1.0 - ind[k];
          cap = 1.0 - upper_expectation_values(fam, comp);
        }
        riemann += (t > 0.0 ? cap : cap - 1.0) * (width / steps);
      }
      CHECK(choquet_integral(fam, f, which) == doctest::Approx(riemann).epsilon(5e-4));
    }
  }
}

TEST_CASE("upper expectation dominated by the Choquet integral of |X|") {
  RandomStream rs(13, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const double p = 0.2 + 0.6 * rs.next_uniform();
    const MeasureFamily fam = MeasureFamily::from_atom_lists(
        {{{-1.5, p}, {0.5, 1.0 - p}}, {{-0.5, 0.5}, {2.0, 0.5}}});
    const auto abs_f = [](double x) { return std::fabs(x); };
    CHECK(upper_expectation(fam, abs_f) <=
          choquet_integral(fam, abs_f, Envelope::Upper) + 1e-12);
  }
}

TEST_CASE("nested sequence values: worked two-step cases") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  for (int n = 1; n <= 4; ++n) {
    const double v = iid_sequence_value(rvf, n, [](std::span<const double> xs) {
      double s = 0.0;
      for (const double x : xs) s += x;
      return s;
    });
    CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  }
  const double v2 = iid_sequence_value(rvf, 2, [](std::span<const double> xs) {
    const double s = xs[0] + xs[1];
    const double vn = std::sqrt(xs[0] * xs[0] + xs[1] * xs[1]);
    return s >= vn ? 1.0 : 0.0;
  });
  CHECK(v2 == doctest::Approx(0.25).epsilon(1e-14));
  const double v1 = iid_sequence_value(rvf, 1, [](std::span<const double> xs) {
    return xs[0] >= 0.5 * std::fabs(xs[0]) ? 1.0 : 0.0;
  });
  CHECK(v1 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sequential independence is order-sensitive") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const double xy2 = iid_sequence_value(rvf, 2, [](std::span<const double> xs) {
    return xs[0] * xs[1] * xs[1];
  });
  const double yx2 = iid_sequence_value(rvf, 2, [](std::span<const double> xs) {
    return xs[1] * xs[0] * xs[0];
  });
  CHECK(xy2 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(yx2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::fabs(xy2 - yx2) > 0.5);
}

TEST_CASE("state-space induction equals the naive nested recursion") {
  RandomStream rs(3, 0);
  for (int rep = 0; rep < 12; ++rep) {
    const double p = 0.2 + 0.6 * rs.next_uniform();
    const double q = 0.2 + 0.6 * rs.next_uniform();
    const MeasureFamily fam = MeasureFamily::from_atom_lists(
        {{{-1.0, p}, {0.0, 0.3 * (1.0 - p)}, {1.0, 0.7 * (1.0 - p)}},
         {{-1.0, 1.0 - q}, {1.0, q}}});
    const int n = 2 + rep % 4;
    const double x_lvl = 0.3 + rs.next_uniform();
    const double dp = adversarial_value_sv(fam, n, [x_lvl](double s, double v2) {
      return s >= x_lvl * std::sqrt(v2) ? 1.0 : 0.0;
    });
    const double naive = naive_nested_value(fam, n, [x_lvl](const std::vector<double>& xs) {
      double s = 0.0, v2 = 0.0;
      for (const double x : xs) {
        s += x;
        v2 += x * x;
      }
      return s >= x_lvl * std::sqrt(v2) ? 1.0 : 0.0;
    });
    CHECK(dp == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("tiny case: literal enumeration of adapted law assignments") {
  const MeasureFamily fam = small_biased_family();  // support {-1, 1}
  const auto payoff = [](double x0, double x1) {
    return (x0 + x1 >= 1.0) ? 1.0 : (x0 - x1) * 0.25;
  };
  // nodes: root, child(-1), child(+1); assignment = law per node
  double best = -1e300;
  const double support[2] = {-1.0, 1.0};
  for (std::size_t root = 0; root < 2; ++root)
    for (std::size_t lo = 0; lo < 2; ++lo)
      for (std::size_t hi = 0; hi < 2; ++hi) {
        double e = 0.0;
        for (std::size_t o1 = 0; o1 < 2; ++o1) {
          const std::size_t leaf_law = support[o1] < 0.0 ? lo : hi;
          double inner = 0.0;
          for (std::size_t o2 = 0; o2 < 2; ++o2)
            inner += fam.probs()[leaf_law][o2] * payoff(support[o1], support[o2]);
          e += fam.probs()[root][o1] * inner;
        }
        best = std::max(best, e);
      }
  const double nested = iid_sequence_value(fam, 2, [&](std::span<const double> xs) {
    return payoff(xs[0], xs[1]);
  });
  CHECK(nested == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("reachable state counts match a direct enumeration") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  std::vector<const MeasureFamily*> steps(3, &rvf);
  // enumerate distinct (S, V^2) pairs per layer by hand
  std::vector<std::pair<double, double>> layer = {{0.0, 0.0}};
  std::size_t total = 1;
  for (int i = 0; i < 3; ++i) {
    std::vector<std::pair<double, double>> next;
    for (const auto& [s, v2] : layer)
      for (const double x : rvf.support())
        next.push_back({s + x, v2 + x * x});
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    total += next.size();
    layer = next;
  }
  CHECK(sv_state_count(steps) == total);
}

TEST_CASE("induction is monotone in the payoff") {
  RandomStream rs(57, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const double p = 0.2 + 0.6 * rs.next_uniform();
    const MeasureFamily fam = MeasureFamily::from_atom_lists(
        {{{-2.0, p}, {1.0, 1.0 - p}}, {{-0.5, 0.5}, {0.5, 0.5}}});
    const int n = 2 + rep % 4;
    const double a = rs.next_uniform();
    const double lo = adversarial_value_sv(fam, n, [a](double s, double v2) {
      return s >= a * std::sqrt(v2) ? 1.0 : 0.0;
    });
    // smaller threshold contains the event pointwise
    const double hi = adversarial_value_sv(fam, n, [a](double s, double v2) {
      return s >= 0.5 * a * std::sqrt(v2) ? 1.0 : 0.0;
    });
    CHECK(lo <= hi);
  }
}

TEST_CASE("random families survive the serialization round trip") {
  RandomStream rs(91, 0);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<std::vector<DiscreteLaw::Atom>> laws;
    const int law_count = 1 + rep % 3;
    for (int k = 0; k < law_count; ++k) {
      const double u = rs.next_uniform();
      const double v = rs.next_uniform() * (1.0 - u);
      laws.push_back({{rs.next_normal() * 2.0, u},
                      {10.0 + rs.next_normal(), v},
                      {-7.5 + rs.next_normal(), 1.0 - u - v}});
    }
    const MeasureFamily fam = MeasureFamily::from_atom_lists(laws, "rt");
    const MeasureFamily back = MeasureFamily::from_json(fam.to_json());
    REQUIRE(back.support_size() == fam.support_size());
    for (std::size_t i = 0; i < fam.support_size(); ++i)
      CHECK(back.support()[i] == fam.support()[i]);
    for (std::size_t k = 0; k < fam.law_count(); ++k)
      for (std::size_t i = 0; i < fam.support_size(); ++i)
        CHECK(back.probs()[k][i] == fam.probs()[k][i]);
    CHECK(back.hash() == fam.hash());
  }
}

TEST_CASE("tree guard raises a resource error") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  CHECK_THROWS_AS(
      iid_sequence_value(rvf, 20, [](std::span<const double>) { return 0.0; }, 1000),
      ResourceError);
}

TEST_CASE("axioms hold exactly for finite maxima of linear expectations") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const std::vector<RealFunction> fns = {
      [](double x) { return x; },
      [](double x) { return x * x; },
      [](double x) { return std::fabs(x); },
  };
  const AxiomReport rep = verify_axioms(rvf, fns);
  CHECK(rep.pass);
  CHECK(rep.max_violation <= 1e-12);

  const MeasureFamily one = MeasureFamily::rademacher();
  CHECK(verify_axioms(one, fns).pass);
  // scaling by zero maps everything to the constant zero
  CHECK(upper_expectation(rvf, [](double) { return 0.0; }) == 0.0);
}

TEST_CASE("json round-trip is exact") {
  const MeasureFamily rvf = MeasureFamily::rademacher_volatility();
  const std::string text = rvf.to_json();
  const MeasureFamily back = MeasureFamily::from_json(text);
  REQUIRE(back.support_size() == rvf.support_size());
  REQUIRE(back.law_count() == rvf.law_count());
  for (std::size_t i = 0; i < rvf.support_size(); ++i)
    CHECK(back.support()[i] == rvf.support()[i]);
  for (std::size_t k = 0; k < rvf.law_count(); ++k)
    for (std::size_t i = 0; i < rvf.support_size(); ++i)
      CHECK(back.probs()[k][i] == rvf.probs()[k][i]);
  CHECK(back.to_json() == text);
  CHECK_THROWS_AS(MeasureFamily::from_json("{\"laws\": []}"), ConfigError);
  CHECK_THROWS_AS(MeasureFamily::from_json("not json"), ConfigError);

  // irrational values survive the 17-digit round trip
  const MeasureFamily odd = MeasureFamily::from_atom_lists(
      {{{-std::sqrt(2.0), 1.0 / 3.0}, {M_PI, 2.0 / 3.0}}});
  const MeasureFamily odd_back = MeasureFamily::from_json(odd.to_json());
  for (std::size_t i = 0; i < odd.support_size(); ++i)
    CHECK(odd_back.support()[i] == odd.support()[i]);
}
