#ifndef GEXPECT_RATE_FUNCRION_HPP
#define GEXPECT_RATE_FUNCRION_HPP

namespace gexpect {

// Limiting normalized cumulant of the quadratic-corrected statistic:
// phi(lambda) = 2 lambda^2 - lambda for lambda > 1/2.
double quadratic_cumulant(double lambda);

// Its Legendre transform over lambda > 1/2: I(x) = (x+1)^2 / 8 on x > 1.
double legendre_rate(double x);

// Lower-bound target for the eta event at level (1+beta): -(1+beta/4)^2/2.
// Pure formula; callers enforce their own beta ranges.
double eta_target_rate(double beta);

}  // namespace gexpect

#endif  // GEXPECT_RATE_FUNCRION_HPP
