#pragma once

#include <cstddef>
#include <functional>

namespace lightcone {

/// Worker count: LIGHTCONE_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. If any
/// call throws, the exception from the smallest failing index is rethrown
/// after all workers finish, so failures are reported deterministically.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lightcone
