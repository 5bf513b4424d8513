#pragma once

#include <cstddef>
#include <functional>

namespace nfa {

// Worker count: NF_ARRAY_OPT_THREADS if set and > 0, hardware concurrency
// otherwise (the env value 0 also means auto).
int worker_count();

// Runs fn(begin, end) over a partition of [0, n) on worker_count() threads.
// Each index is processed exactly once; callers own any output slots, so the
// result is identical for every worker count. Serial when one worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace nfa
