#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snk {

// Global switch for the OpenMP kernels. Tests flip this to compare the
// parallel kernels against their serial references; the bench tool times both.
// Every kernel is an element-independent map (no floating-point reductions
// across iterations), so results are bitwise identical either way.
inline bool& parallel_enabled() {
    static bool enabled = true;
    return enabled;
}

template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
#ifdef _OPENMP
    if (parallel_enabled() && n > 64) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

}  // namespace snk
