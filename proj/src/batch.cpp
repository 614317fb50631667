#include "kver/batch.hpp"

#include <exception>
#include <mutex>

#ifdef KVER_HAVE_OPENMP
#include <omp.h>
#endif

namespace kver {

void for_each_index(int n, Exec mode, const std::function<void(int)>& body) {
#ifdef KVER_HAVE_OPENMP
  if (mode == Exec::parallel) {
    // Exceptions may not cross the parallel region; capture the first one
    // (by index, for determinism) and rethrow after the join.
    std::exception_ptr first;
    int first_index = n;
    std::mutex m;
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (i < first_index) {
          first_index = i;
          first = std::current_exception();
        }
      }
    }
    if (first) std::rethrow_exception(first);
    return;
  }
#else
  (void)mode;
#endif
  for (int i = 0; i < n; ++i) body(i);
}

int batch_thread_count() {
#ifdef KVER_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kver
