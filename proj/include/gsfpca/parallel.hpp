#pragma once

#include <cstdint>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gsfpca {

// Thread-count control for the OpenMP kernels. 0 = all cores.
void set_threads(int n);
int thread_count();

// Parallel loop over [0, n). The body must write only to disjoint slots so
// results are identical to the serial loop for any thread count.
template <typename Fn>
void parallel_for(std::int64_t n, const Fn& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

// Serial reference for the same loop shape; kept for equivalence tests and
// the kernel benchmark.
template <typename Fn>
void serial_for(std::int64_t n, const Fn& body) {
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace gsfpca
