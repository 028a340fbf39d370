#ifndef GEXPECT_PARALLEL_HPP
#define GEXPECT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace gexpect {

// Global worker-count knob. 0 = use hardware concurrency. The CLI sets this
// from GEXPECT_THREADS; library code never reads the environment itself.
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs fn(i) for i in [0, n). Results must be written into caller-owned
// slots indexed by i so the aggregate is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gexpect

#endif  // GEXPECT_PARALLEL_HPP
