#pragma once

#include <cstddef>
#include <functional>

namespace cam {

// Runs body(i) for i in [0, count) on up to `threads` worker threads.
// Work is dealt out by a shared atomic counter, so each index runs exactly
// once; bodies must not depend on execution order. threads <= 1 runs inline.
// Exceptions from workers are captured and the first one is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

} // namespace cam
