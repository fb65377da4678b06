#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace clarklab {

/// Fixed reduction chunk. Partial sums are formed per chunk and combined
/// pairwise, so results do not depend on the worker count.
inline constexpr std::size_t kReductionChunk = 1024;

/// Worker pool size: CLARKLAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Sequential sums over kReductionChunk-sized blocks, then a pairwise tree.
double pairwise_sum(std::span<const double> values);

}  // namespace clarklab
