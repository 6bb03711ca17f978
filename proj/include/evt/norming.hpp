#pragma once

#include <cstddef>

namespace evt {

/// Normalizing scale a_n > 0 and centering b_n: (M_n - b_n) / a_n.
struct NormingPair {
    double a = 1.0;
    double b = 0.0;
    std::size_t n = 0;

    double normalize(double value) const { return (value - b) / a; }
    double denormalize(double x) const { return a * x + b; }
};

}  // namespace evt
