#pragma once

#include <cstddef>
#include <functional>

namespace mint {

/// MINT_THREADS if set and positive, otherwise the hardware concurrency.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
/// results into slot i so the outcome is independent of scheduling. If any
/// call throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace mint
