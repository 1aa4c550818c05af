#pragma once

#include <exception>
#include <functional>
#include <vector>

namespace qua {

// Worker count a sweep will actually use for a requested degree: clamped to
// [1, processor count], and 1 whenever no parallel runtime is compiled in.
int effective_jobs(int requested);

// Serial reference kernel: evaluates fn on 0..count-1 in index order.
template <typename R>
std::vector<R> serial_sweep(int count, const std::function<R(int)>& fn) {
    std::vector<R> out;
    out.reserve(static_cast<size_t>(count > 0 ? count : 0));
    for (int i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
}

namespace detail {
// Runs the parallel region; results land at their own index, so the merged
// vector is identical to the serial reference for every worker count. If any
// evaluation throws, the exception from the lowest index is rethrown.
void parallel_region(int count, int workers, const std::function<void(int)>& body);
}  // namespace detail

// Parallel kernel with the serial contract: fn must be safe to call from
// multiple threads on distinct indices (all engine caches are internally
// synchronized); output is byte-identical to serial_sweep for any jobs value.
template <typename R>
std::vector<R> parallel_sweep(int count, int jobs, const std::function<R(int)>& fn) {
    if (count <= 0) return {};
    const int workers = effective_jobs(jobs);
    if (workers <= 1 || count == 1) return serial_sweep(count, fn);
    std::vector<R> out(static_cast<size_t>(count));
    detail::parallel_region(count, workers,
                            [&](int i) { out[static_cast<size_t>(i)] = fn(i); });
    return out;
}

}  // namespace qua
