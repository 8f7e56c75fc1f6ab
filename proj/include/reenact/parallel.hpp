#pragma once

#include <cstddef>
#include <functional>

namespace reenact {

/// Resolves a worker-count flag; values < 1 mean "available parallelism".
int resolve_workers(int requested) noexcept;

/// Runs `body(i)` for every i in [0, count) on up to `workers` threads.
///
/// Each index is processed exactly once. If bodies throw, the exception from
/// the smallest failing index is rethrown after all in-flight work finishes,
/// so failures are reported identically regardless of scheduling.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace reenact
