#include "gexpect/rate_function.hpp"

#include "gexpect/errors.hpp"

namespace gexpect {

double quadratic_cumulant(double lambda) {
  if (!(lambda > 0.5)) throw DomainError("quadratic_cumulant: lambda > 1/2");
  return 2.0 * lambda * lambda - lambda;
}

double legendre_rate(double x) {
  if (!(x > 1.0)) throw DomainError("legendre_rate: defined for x > 1");
  return (x + 1.0) * (x + 1.0) / 8.0;
}

double eta_target_rate(double beta) {
  const double c = 1.0 + beta / 4.0;
  return -0.5 * c * c;
}

}  // namespace gexpect
