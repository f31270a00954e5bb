#include "qvr/parallel.hpp"

#include <atomic>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qvr {

std::vector<double> map_grid_serial(const std::vector<double>& xs,
                                    const std::function<double(double)>& f) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
}

void for_each_index_serial(std::size_t count,
                           const std::function<void(std::size_t)>& work) {
    for (std::size_t i = 0; i < count; ++i) work(i);
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& work,
                    const Exec& ex) {
#ifdef _OPENMP
    if (ex.parallel && count > 1) {
        std::vector<std::exception_ptr> errors(count, nullptr);
        std::atomic<bool> failed{false};
        const int nthreads = ex.threads > 0 ? ex.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                work(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (failed.load()) {
            // Rethrow the lowest-index failure so error messages are
            // independent of the thread schedule.
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        return;
    }
#else
    (void)ex;
#endif
    for_each_index_serial(count, work);
}

std::vector<double> map_grid(const std::vector<double>& xs,
                             const std::function<double(double)>& f, const Exec& ex) {
    std::vector<double> out(xs.size());
    for_each_index(
        xs.size(), [&](std::size_t i) { out[i] = f(xs[i]); }, ex);
    return out;
}

}  // namespace qvr
