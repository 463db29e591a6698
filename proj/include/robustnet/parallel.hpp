#pragma once

#include <cstddef>
#include <functional>

namespace robustnet {

// Worker count used when a caller passes workers <= 0: the ROBUSTNET_WORKERS
// environment variable if set, otherwise std::thread::hardware_concurrency().
int default_worker_count();

// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
// claimed dynamically; the body must only write to index-addressed slots, so
// results do not depend on the worker count. The first exception thrown by
// any body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace robustnet
