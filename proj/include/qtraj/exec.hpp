#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qtraj::exec {

// Serial is the reference path; Parallel must produce bit-identical output
// (each output element is computed independently, no shared reductions).
enum class Policy { Serial, Parallel };

inline void set_max_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace qtraj::exec
