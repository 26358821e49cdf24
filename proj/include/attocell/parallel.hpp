#pragma once

#include <functional>

namespace attocell {

/// Number of worker threads used by parallel_for.  Controlled by the
/// ATTOCELL_THREADS environment variable (clamped to [1, 64]); defaults to
/// the hardware concurrency when unset or unparsable.  Re-read on each call
/// so separate processes with different settings behave as configured.
int thread_count();

/// Runs fn(i) for every i in [0, n) using up to thread_count() workers with
/// dynamic load balancing.  fn must confine its writes to state owned by
/// index i (e.g. slot i of a results vector); callers then reduce the slots
/// sequentially, so the outcome is identical for any worker count.  A worker
/// exception is captured and rethrown on the calling thread after the join.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace attocell
