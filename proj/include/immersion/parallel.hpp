#pragma once

#include <cstddef>
#include <functional>

namespace immersion {

/// Worker count: IMMERSION_FORGE_THREADS when set (≥ 1), otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) across worker threads. Iterations must be
/// independent; the first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace immersion
