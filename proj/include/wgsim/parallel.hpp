#pragma once

#include <cstddef>
#include <functional>

namespace wgsim {

/// Worker count used by parallel maps; 0 selects hardware concurrency.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on contiguous blocks, one block per worker.
/// Results must be written to disjoint slots; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wgsim
