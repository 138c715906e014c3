#pragma once

#include <cstddef>
#include <functional>

namespace jlab {

/// Worker count used by node loops. Defaults to 1; the CLI sets it from
/// --threads.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// body(begin, end) on each. Runs inline when a single worker is configured.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace jlab
