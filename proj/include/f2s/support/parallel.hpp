#pragma once

#include <cstddef>

#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace f2s {

/// Runs fn(i) for i in [0, n) on at most `jobs` threads. Callers write results
/// into slot i, so the reduction order never depends on scheduling.
template <class Fn>
void parallel_for_index(std::size_t n, int jobs, Fn&& fn) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  tbb::task_arena arena(jobs);
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); });
  });
}

}  // namespace f2s
