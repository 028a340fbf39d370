#ifndef GEXPECT_RNG_HPP
#define GEXPECT_RNG_HPP

#include <cstdint>

namespace gexpect {

// Counter-based random numbers: every draw is a pure function of
// (key, stream, counter), so parallel jobs get reproducible,
// non-overlapping streams by construction.

std::uint64_t mix64(std::uint64_t x);

// Uniform on (0, 1), never returning 0 or 1 exactly.
double uniform01(std::uint64_t key, std::uint64_t stream, std::uint64_t counter);

// Standard normal via inverse-CDF (Wichura's AS241, double precision).
double inverse_normal_cdf(double p);

double normal01(std::uint64_t key, std::uint64_t stream, std::uint64_t counter);

// Stateful view over one stream; next() advances the counter.
class RandomStream {
 public:
  RandomStream(std::uint64_t key, std::uint64_t stream)
      : key_(key), stream_(stream) {}

  double next_uniform() { return uniform01(key_, stream_, counter_++); }
  double next_normal() { return normal01(key_, stream_, counter_++); }

  // Derives an independent child stream, e.g. one per parallel job.
  RandomStream child(std::uint64_t index) const {
    return RandomStream(key_, mix64(stream_ ^ mix64(index + 0x9e3779b97f4a7c15ULL)));
  }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace gexpect

#endif  // GEXPECT_RNG_HPP
