#ifndef GEXPECT_TEST_FUNCTION_HPP
#define GEXPECT_TEST_FUNCTION_HPP

#include <functional>
#include <string>
#include <vector>

namespace gexpect {

// Bounded evaluable test functions: piecewise-linear interpolants (flat
// beyond the end breakpoints, so globally Lipschitz and bounded) and
// polynomials evaluated on a clamped argument.
class TestFunction {
 public:
  enum class Kind { PiecewiseLinear, PolynomialCapped };

  // xs strictly increasing; extends flat outside [xs.front(), xs.back()].
  static TestFunction piecewise_linear(std::vector<double> xs,
                                       std::vector<double> ys);

  // p(clamp(x, -cap_radius, cap_radius)), coefficients low order first.
  static TestFunction polynomial_capped(std::vector<double> coeffs,
                                        double cap_radius);

  // Constant c (degenerate piecewise-linear).
  static TestFunction constant(double c);

  // Lipschitz ramp: 0 for x <= lo, 1 for x >= hi, linear between. With
  // (lo, hi) = (1/2, 1) this sits between the indicators of {x>1} and
  // {x>1/2}, the mollifier shape used by the tail bounds.
  static TestFunction ramp_indicator(double lo, double hi);

  double operator()(double x) const;
  Kind kind() const { return kind_; }
  double lipschitz_bound() const { return lipschitz_; }
  double cap_radius() const { return cap_radius_; }

 private:
  Kind kind_ = Kind::PiecewiseLinear;
  std::vector<double> xs_, ys_;     // piecewise-linear
  std::vector<double> coeffs_;      // polynomial
  double cap_radius_ = 0.0;
  double lipschitz_ = 0.0;
};

// A payoff evaluable at every real; what the expectation operators consume.
// Indicators are accepted here on purpose: on finite supports every real
// function is representable, so capacities evaluate exactly.
using RealFunction = std::function<double(double)>;

}  // namespace gexpect

#endif  // GEXPECT_TEST_FUNCTION_HPP
