#pragma once

#include <cstddef>
#include <functional>

namespace ouhjb {

/// Worker count used by every parallel loop in the library. 0 selects
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for every i in [0, n). Work is split into contiguous blocks;
/// callers write results into slot i so that any reduction done afterwards in
/// index order is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ouhjb
