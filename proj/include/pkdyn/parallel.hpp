#pragma once

#include <cstddef>
#include <functional>

namespace pkdyn {

// Global worker-pool width used by parallel_for.  0 means "hardware threads".
// The CLI sets this once at startup from the run configuration.
void set_worker_count(std::size_t n);
std::size_t worker_count();

// Index-parallel loop.  Results must be written to per-index slots so the
// output is independent of scheduling; reductions are done sequentially by
// the caller afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pkdyn
