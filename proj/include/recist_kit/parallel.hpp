#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace recist_kit::parallel {

enum class Exec {
  Serial,    // reference path, always available
  Parallel,  // OpenMP over independent items
};

// Worker cap: RECIST_KIT_THREADS when set and positive, else the OpenMP
// default. 1 without OpenMP.
int max_workers();

// Runs f(i) for i in [0, n). Items must be independent; results are written
// to pre-sized slots so output is identical for any thread count.
template <typename F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 1) {
    const int workers = max_workers();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace recist_kit::parallel
