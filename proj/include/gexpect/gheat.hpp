#ifndef GEXPECT_GHEAT_HPP
#define GEXPECT_GHEAT_HPP

#include <vector>

#include "gexpect/test_function.hpp"

namespace gexpect {

struct GParams {
  double sigma_lower;
  double sigma_upper;
};

// G(alpha) = (sigma_upper^2 alpha^+ - sigma_lower^2 alpha^-) / 2.
double g_generator(double alpha, const GParams& p);

struct GridConfig {
  int refinement_level = 2;     // dx = dx_base / 2^level
  double dx_base = 0.5;
  double safety_factor = 6.0;   // half-width >= safety * sigma_upper * sqrt(t)
  double half_width = 0.0;      // 0 = derive from safety_factor
  double cfl_fraction = 0.45;   // dt = cfl * dx^2 / sigma_upper^2; must be <= 0.5
};

// Space-time grid solution of  du/dt = G(d^2u/dx^2),  u(x, 0) = phi(x).
// Explicit central scheme, monotone under the CFL condition; domain edges
// use a zero-second-difference rule (G(0) = 0 freezes the boundary values).
// The payoff is read only inside the domain, i.e. capped at the edge; the
// cap radius is recorded.
struct GridSolution {
  std::vector<double> x;
  std::vector<double> u;  // values at t_final
  double dx = 0.0;
  double dt = 0.0;
  double t_final = 0.0;
  int steps = 0;
  double cap_radius = 0.0;

  double value_at(double x0) const;  // linear interpolation
};

GridSolution solve_g_heat(const RealFunction& phi, double t, const GParams& p,
                          const GridConfig& cfg = {});

// u(0, 1): the expectation of phi under the zero-mean distribution with
// variance band [sigma_lower^2, sigma_upper^2].
double gnormal_expectation(const RealFunction& phi, const GParams& p,
                           const GridConfig& cfg = {});

// Classical reference: E[phi(sigma Z)], Z standard normal, by Gauss-Hermite
// quadrature. Used for the sigma_lower == sigma_upper reduction checks.
double gauss_hermite_normal_expectation(const RealFunction& phi, double sigma,
                                        int nodes = 96);

}  // namespace gexpect

#endif  // GEXPECT_GHEAT_HPP
