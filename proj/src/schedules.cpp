#include "gexpect/schedules.hpp"

#include <cmath>

#include "gexpect/errors.hpp"

namespace gexpect {

BlockSchedule BlockSchedule::mk(std::int64_t n_max) {
  BlockSchedule s;
  s.kind = Kind::Mk;
  std::int64_t last = 2;  // indices must stay >= 3 and increasing
  for (std::int64_t k = 3; k < 4096; ++k) {
    const double ll = std::log(std::log(static_cast<double>(k)));
    const double expo = static_cast<double>(k) / (ll * ll);
    if (expo > 700.0) continue;  // astronomically large early entries
    const double value = std::exp(expo);
    if (value > static_cast<double>(n_max)) continue;
    const std::int64_t idx = static_cast<std::int64_t>(std::floor(value));
    if (idx <= last) continue;
    s.indices.push_back(idx);
    last = idx;
  }
  return s;
}

BlockSchedule BlockSchedule::nk(std::int64_t n_max) {
  BlockSchedule s;
  s.kind = Kind::Nk;
  std::int64_t last = 2;
  for (std::int64_t k = 2; k < 4096; ++k) {
    const double lg = std::log(static_cast<double>(k));
    const double expo = static_cast<double>(k) * lg * lg;
    if (expo > 700.0) break;  // monotone; nothing further fits
    const double value = std::exp(expo);
    if (value > static_cast<double>(n_max)) break;
    const std::int64_t idx = static_cast<std::int64_t>(std::floor(value));
    if (idx <= last) continue;
    s.indices.push_back(idx);
    last = idx;
  }
  return s;
}

BlockSchedule BlockSchedule::explicit_indices(std::vector<std::int64_t> idx) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 3) throw ConfigError("schedule indices must be >= 3");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw ConfigError("schedule indices must be strictly increasing");
  }
  BlockSchedule s;
  s.kind = Kind::Explicit;
  s.indices = std::move(idx);
  return s;
}

std::string BlockSchedule::name() const {
  switch (kind) {
    case Kind::Mk: return "mk";
    case Kind::Nk: return "nk";
    default: return "explicit";
  }
}

}  // namespace gexpect
