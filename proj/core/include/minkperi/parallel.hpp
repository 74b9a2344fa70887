#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace minkperi {

// Worker cap: MINKPERI_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int thread_cap();

// Runs body(i) for i in [0, count) on up to thread_cap() threads. Each index
// runs exactly once; callers write results into per-index slots so output
// never depends on scheduling. If any call throws, the exception from the
// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace minkperi
