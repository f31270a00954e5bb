#ifndef QVR_PARALLEL_HPP
#define QVR_PARALLEL_HPP

#include <functional>
#include <vector>

namespace qvr {

/// Execution policy for grid kernels. Every kernel has a serial reference
/// path; the OpenMP path must produce identical values (points are
/// independent, so thread count never changes a result, only wall time).
struct Exec {
    bool parallel = true;
    int threads = 0;  ///< 0 = OpenMP default
};

/// Serial reference implementation.
std::vector<double> map_grid_serial(const std::vector<double>& xs,
                                    const std::function<double(double)>& f);

/// OpenMP kernel (falls back to serial when built without OpenMP or when
/// ex.parallel is false). The first exception thrown at the lowest grid
/// index is rethrown after the loop.
std::vector<double> map_grid(const std::vector<double>& xs,
                             const std::function<double(double)>& f,
                             const Exec& ex = {});

/// Index-space variant for 2-D maps and sweeps; fills results via `work(i)`.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& work,
                    const Exec& ex = {});

void for_each_index_serial(std::size_t count,
                           const std::function<void(std::size_t)>& work);

}  // namespace qvr

#endif
