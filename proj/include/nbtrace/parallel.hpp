#pragma once

#include <cstddef>
#include <functional>

namespace nbtrace {

inline constexpr const char* kWorkersEnv = "NBTRACE_WORKERS";

// Worker count: `requested` if positive, else $NBTRACE_WORKERS, else the
// hardware concurrency (at least 1).
int resolve_workers(int requested = 0);

// Calls body(i) for i in [0, count) on up to `workers` threads. Exceptions
// are rethrown on the calling thread (the first one by index wins).
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace nbtrace
