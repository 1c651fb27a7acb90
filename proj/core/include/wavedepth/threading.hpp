#pragma once

#include <cstddef>
#include <functional>

namespace wavedepth {

// Worker cap: WAVEDEPTH_THREADS when set (minimum 1), hardware concurrency
// otherwise.
unsigned thread_cap();

// Splits [begin, end) into contiguous chunks, one worker per chunk. Each index
// must write only its own outputs; results are then independent of the thread
// count, which keeps every caller bitwise deterministic. Runs inline when the
// range is small or the cap is 1.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace wavedepth
