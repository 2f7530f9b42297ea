// SPDX-License-Identifier: Apache-2.0
#ifndef NRANGE_PARALLEL_HPP
#define NRANGE_PARALLEL_HPP

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nrange {

// Execution policy for the data-parallel kernels. Every kernel writes
// per-index results into preallocated slots (or reduces integers), so
// serial and parallel runs produce bit-identical output.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename F>
void parallel_for(Exec exec, std::int64_t n, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace nrange

#endif
