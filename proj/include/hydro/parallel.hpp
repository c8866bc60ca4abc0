#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

#include <exception>
#include <mutex>
#include <utility>

namespace hydro {

/// Number of worker threads available to parallel sweeps.
inline int hardware_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs fn(i) for i in [0, n). jobs <= 1 selects the serial reference path;
/// jobs > 1 fans out with OpenMP. Work items must be independent and write
/// only to their own output slot, so results are identical (bitwise) on
/// both paths regardless of scheduling. The first exception thrown by a
/// work item is rethrown after the loop completes.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for (int i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace hydro
