#pragma once

#include <cstddef>
#include <span>

namespace mhf {

/// Pairwise-tree summation: deterministic bracketing independent of chunking,
/// with error growth O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
    const size_t n = v.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

} // namespace mhf
