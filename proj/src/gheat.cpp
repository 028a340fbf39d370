#include "gexpect/gheat.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gexpect/errors.hpp"
#include "gexpect/parallel.hpp"

namespace gexpect {

double g_generator(double alpha, const GParams& p) {
  if (!(p.sigma_lower > 0.0) || !(p.sigma_upper >= p.sigma_lower))
    throw ConfigError("need 0 < sigma_lower <= sigma_upper");
  if (alpha >= 0.0) return 0.5 * p.sigma_upper * p.sigma_upper * alpha;
  return 0.5 * p.sigma_lower * p.sigma_lower * alpha;
}

double GridSolution::value_at(double x0) const {
  if (x.empty()) throw ConfigError("empty grid");
  if (x0 <= x.front()) return u.front();
  if (x0 >= x.back()) return u.back();
  const auto it = std::upper_bound(x.begin(), x.end(), x0);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (x0 - x[i - 1]) / (x[i] - x[i - 1]);
  return u[i - 1] + t * (u[i] - u[i - 1]);
}

GridSolution solve_g_heat(const RealFunction& phi, double t, const GParams& p,
                          const GridConfig& cfg) {
  if (!(p.sigma_lower > 0.0) || !(p.sigma_upper >= p.sigma_lower))
    throw ConfigError("need 0 < sigma_lower <= sigma_upper");
  if (!(t > 0.0)) throw DomainError("need t > 0");
  if (!(cfg.cfl_fraction > 0.0) || cfg.cfl_fraction > 0.5)
    throw ConfigError("CFL violated: need sigma_upper^2 dt/dx^2 <= 1/2");
  if (cfg.refinement_level < 0 || cfg.refinement_level > 12)
    throw ConfigError("refinement level out of range");

  const double needed = cfg.safety_factor * p.sigma_upper * std::sqrt(t);
  double half_width = cfg.half_width;
  if (half_width == 0.0) half_width = needed;
  if (half_width + 1e-12 < needed)
    throw ConfigError("domain too small: boundary influence reaches the "
                      "evaluation point");

  const double dx = cfg.dx_base / std::pow(2.0, cfg.refinement_level);
  const long long half_cells = static_cast<long long>(std::ceil(half_width / dx));
  const std::size_t m = static_cast<std::size_t>(2 * half_cells + 1);

  GridSolution sol;
  sol.dx = dx;
  sol.t_final = t;
  sol.cap_radius = static_cast<double>(half_cells) * dx;
  sol.x.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    sol.x[i] = (static_cast<double>(i) - static_cast<double>(half_cells)) * dx;

  double dt = cfg.cfl_fraction * dx * dx / (p.sigma_upper * p.sigma_upper);
  const int steps = static_cast<int>(std::ceil(t / dt - 1e-12));
  dt = t / steps;  // hit t exactly; only shrinks dt, so CFL still holds
  sol.dt = dt;
  sol.steps = steps;

  sol.u.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.u[i] = phi(sol.x[i]);

  std::vector<double> next(m);
  const double inv_dx2 = 1.0 / (dx * dx);
  const double up = 0.5 * p.sigma_upper * p.sigma_upper * dt;
  const double lo = 0.5 * p.sigma_lower * p.sigma_lower * dt;
  for (int s = 0; s < steps; ++s) {
    next.front() = sol.u.front();  // zero second difference at the edges
    next.back() = sol.u.back();
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double d2 = (sol.u[i + 1] - 2.0 * sol.u[i] + sol.u[i - 1]) * inv_dx2;
      next[i] = sol.u[i] + (d2 >= 0.0 ? up * d2 : lo * d2);
    }
    sol.u.swap(next);
  }
  return sol;
}

double gnormal_expectation(const RealFunction& phi, const GParams& p,
                           const GridConfig& cfg) {
  return solve_g_heat(phi, 1.0, p, cfg).value_at(0.0);
}

namespace {

// Nodes/weights for integral of e^{-x^2} f(x); physicists' Hermite,
// Newton iteration from the classical initial guesses.
void gauss_hermite_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

}  // namespace

double gauss_hermite_normal_expectation(const RealFunction& phi, double sigma,
                                        int nodes) {
  if (!(sigma > 0.0)) throw DomainError("need sigma > 0");
  if (nodes < 2 || nodes > 512) throw ConfigError("node count out of range");
  std::vector<double> x, w;
  gauss_hermite_nodes(nodes, x, w);
  const double scale = sigma * std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * phi(scale * x[i]);
  return acc / std::sqrt(M_PI);
}

}  // namespace gexpect
