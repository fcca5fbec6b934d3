#pragma once
// Execution policy shared by the solvers. Parallel runs independent units
// (B&B root subtrees, batch instances) across OpenMP threads; every solver
// reduces results deterministically, so Serial and Parallel return
// bit-identical answers. Serial is the reference implementation exercised
// against Parallel in the tests and in tools/bench.

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdnopt {

enum class ExecPolicy { Serial, Parallel };

// fn(i) for i in [0, n); iterations must be independent.
template <typename Fn>
void for_each_index(ExecPolicy policy, int n, Fn&& fn) {
#ifdef _OPENMP
  if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#endif
  (void)policy;
  for (int i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sdnopt
