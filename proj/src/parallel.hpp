#pragma once

#include <cstddef>
#include <functional>

namespace xilimit {

// Worker count: XI_LIMIT_THREADS if set and positive, else the hardware count.
std::size_t worker_count();

// Calls fn(i) for i in [0, count) on up to worker_count() threads. Work is
// handed out by index, so results stored per index do not depend on
// scheduling. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace xilimit
