#pragma once

#include <cstddef>
#include <exception>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace degpath {

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Run fn(i) for i in [0, n). With threads > 1 iterations run under OpenMP;
/// threads <= 1 is the serial reference path. Each iteration must write only
/// to its own output slot so results are identical in both modes.
/// The first exception thrown (if any) is rethrown after the loop completes.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
#ifdef _OPENMP
  if (threads > 1 && n > 1) {
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#else
  (void)threads;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace degpath
