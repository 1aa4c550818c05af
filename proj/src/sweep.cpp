#include "qua/sweep.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qua {

int effective_jobs(int requested) {
    if (requested < 1) requested = 1;
#ifdef _OPENMP
    const int procs = std::max(1, omp_get_num_procs());
    return std::min(requested, procs);
#else
    return 1;
#endif
}

namespace detail {

void parallel_region(int count, int workers, const std::function<void(int)>& body) {
#ifdef _OPENMP
    std::exception_ptr first_error;
    int error_index = count;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical
            {
                if (i < error_index) {
                    error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    (void)workers;
    for (int i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace detail

}  // namespace qua
