#pragma once

#include <functional>

namespace oforge {

/// Worker cap: OPERAD_FORGE_THREADS if set (clamped to [1,64]), else 1.
int thread_budget();

/// Runs fn(i) for i in [0, n), possibly on several threads. Each index is
/// executed exactly once; callers keep determinism by writing results into
/// index-addressed slots and merging in index order.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace oforge
