#include "gexpect/heterogeneous.hpp"

#include <algorithm>
#include <cmath>

#include "gexpect/errors.hpp"
#include "gexpect/sublinear.hpp"

namespace gexpect {

HeterogeneousMoments heterogeneous_delta(
    std::span<const MeasureFamily* const> array, double x) {
  if (array.empty()) throw ConfigError("heterogeneous array is empty");
  if (!(x > 0.0)) throw DomainError("heterogeneous_delta: need x > 0");

  HeterogeneousMoments out;
  out.n = static_cast<int>(array.size());
  out.x = x;
  out.b_bar_sq = 0.0;
  out.b_under_sq = 0.0;
  out.max_upper_second = 0.0;
  for (const MeasureFamily* fam : array) {
    const double up = upper_expectation(*fam, [](double v) { return v * v; });
    const double lo = conjugate_expectation(*fam, [](double v) { return v * v; });
    out.b_bar_sq += up;
    out.b_under_sq += lo;
    out.max_upper_second = std::max(out.max_upper_second, up);
  }
  if (!(out.b_under_sq > 0.0))
    throw ConfigError("degenerate array: conjugate second-moment sum is zero");
  out.q = out.b_bar_sq / out.b_under_sq;

  const double b_bar = std::sqrt(out.b_bar_sq);
  double acc = 0.0;
  for (const MeasureFamily* fam : array) {
    acc += upper_expectation(*fam, [x, b_bar](double v) {
      return v * v * std::min(1.0, std::fabs(x * v / b_bar));
    });
  }
  out.delta = acc / out.b_bar_sq;
  return out;
}

HeterogeneousMoments heterogeneous_delta(const std::vector<MeasureFamily>& array,
                                         double x) {
  std::vector<const MeasureFamily*> ptrs;
  ptrs.reserve(array.size());
  for (const auto& f : array) ptrs.push_back(&f);
  return heterogeneous_delta(std::span<const MeasureFamily* const>(ptrs), x);
}

}  // namespace gexpect
