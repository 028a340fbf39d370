#ifndef GEXPECT_SCHEDULES_HPP
#define GEXPECT_SCHEDULES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gexpect {

// Block index schedules used by the almost-sure arguments:
//   mk: m_k = floor(e^{k / (log log k)^2}), k >= 3
//   nk: n_k = floor(e^{k (log k)^2}),       k >= 2
// Both guarded to start where the iterated logarithm is defined and kept
// strictly increasing (the mk values dip before rising, so small k entries
// above the cap are skipped).
struct BlockSchedule {
  enum class Kind { Mk, Nk, Explicit };
  Kind kind = Kind::Explicit;
  std::vector<std::int64_t> indices;

  static BlockSchedule mk(std::int64_t n_max);
  static BlockSchedule nk(std::int64_t n_max);
  static BlockSchedule explicit_indices(std::vector<std::int64_t> idx);

  std::string name() const;
};

}  // namespace gexpect

#endif  // GEXPECT_SCHEDULES_HPP
