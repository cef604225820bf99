#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sweetspot {

/// Kernels that have an OpenMP path take an Exec tag; Serial runs the same
/// arithmetic on one thread so results are identical either way.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sweetspot
