#pragma once

#include <cstddef>
#include <cstdint>

namespace nodalheat::detail {

/// Runs body(i) for i in [0, n) on the OpenMP team. Callers write results
/// into per-index slots so reductions never depend on the schedule.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

} // namespace nodalheat::detail
