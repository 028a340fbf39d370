#ifndef GEXPECT_SUBLINEAR_HPP
#define GEXPECT_SUBLINEAR_HPP

#include <functional>
#include <string>
#include <vector>

#include "gexpect/discrete_law.hpp"
#include "gexpect/test_function.hpp"

namespace gexpect {

// Event on the support, decidable at every support point.
using EventPredicate = std::function<bool(double)>;

struct CapacityPair {
  double upper;  // V(A): max over laws of P(A)
  double lower;  // v(A) = 1 - V(complement of A)
};

enum class Envelope { Upper, Lower };

// f evaluated on the merged support; throws DomainError on non-finite values.
std::vector<double> evaluate_on_support(const MeasureFamily& fam,
                                        const RealFunction& f);

// max over laws of the linear expectation of f.
double upper_expectation(const MeasureFamily& fam, const RealFunction& f);
double upper_expectation_values(const MeasureFamily& fam,
                                const std::vector<double>& values);

// -E[-f] = min over laws.
double conjugate_expectation(const MeasureFamily& fam, const RealFunction& f);
double conjugate_expectation_values(const MeasureFamily& fam,
                                    const std::vector<double>& values);

// Index of the law attaining the maximum; first law wins ties.
std::size_t argmax_law(const MeasureFamily& fam,
                       const std::vector<double>& values);

CapacityPair capacity(const MeasureFamily& fam, const EventPredicate& event);

// Exact level-set evaluation of the Choquet integral of f under the upper
// (or lower) capacity: on a finite support the integrand is a step function.
double choquet_integral(const MeasureFamily& fam, const RealFunction& f,
                        Envelope which);

struct AxiomReport {
  double monotonicity = 0.0;       // max over pairs of E[f] - E[max(f,g)]
  double constant_preserving = 0.0;
  double sub_additivity = 0.0;     // max of E[f+g] - E[f] - E[g]
  double positive_homogeneity = 0.0;
  double capacity_duality = 0.0;   // max of |v(A) - (1 - V(A^c))|
  double max_violation = 0.0;
  bool pass = false;               // max_violation <= tolerance
};

// Checks the defining properties on all pairs from fns plus a set of
// threshold events; reports the worst violation (never throws for one).
AxiomReport verify_axioms(const MeasureFamily& fam,
                          const std::vector<RealFunction>& fns,
                          double tolerance = 1e-10);

}  // namespace gexpect

#endif  // GEXPECT_SUBLINEAR_HPP
