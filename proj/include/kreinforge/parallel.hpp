#pragma once

#include <cstddef>
#include <functional>

namespace kreinforge {

// Runs f(i) for i in [0, count) on up to `jobs` threads.  Work items are
// indexed, so callers write results into preallocated slots and the outcome
// is independent of the thread count.  Exceptions from workers are rethrown
// on the calling thread.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& f);

// Jobs resolution: explicit flag, else KREIN_FORGE_JOBS, else 1.
int resolve_jobs(int requested);

}  // namespace kreinforge
