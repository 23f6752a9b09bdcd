#pragma once

// OpenMP loop macros. Without OpenMP the loops run serially.
#if defined(HAMGAME_USE_OPENMP) && HAMGAME_USE_OPENMP
#include <omp.h>
#define HAMGAME_OMP_STATIC_LOOP _Pragma("omp parallel for schedule(static)")
#define HAMGAME_OMP_DYNAMIC_LOOP _Pragma("omp parallel for schedule(dynamic, 1)")
#else
#define HAMGAME_OMP_STATIC_LOOP
#define HAMGAME_OMP_DYNAMIC_LOOP
#endif

namespace hamgame {

inline int max_threads() {
#if defined(HAMGAME_USE_OPENMP) && HAMGAME_USE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#if defined(HAMGAME_USE_OPENMP) && HAMGAME_USE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline int thread_id() {
#if defined(HAMGAME_USE_OPENMP) && HAMGAME_USE_OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace hamgame
