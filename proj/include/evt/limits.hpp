#pragma once

// Finite stand-ins for "the limit as x tends to the endpoint": a sequence
// evaluated on a grid approaching the endpoint is declared stabilized when its
// trailing values agree.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace evt {

struct LimitEstimate {
    double value = 0.0;  // last finite value of the sequence
    bool stabilized = false;
};

/// Declares a sequence stabilized when its last `window` entries are finite
/// and lie within rel_tol * max(1, |last|) of the last entry. The unit floor
/// keeps sequences converging to 0 from never qualifying.
inline LimitEstimate stabilized_limit(std::span<const double> values, double rel_tol, std::size_t window = 3) {
    LimitEstimate out;
    if (values.empty()) return out;
    out.value = values.back();
    if (values.size() < window || window == 0) return out;
    const double last = values.back();
    if (!std::isfinite(last)) return out;
    const double tol = rel_tol * std::max(1.0, std::abs(last));
    for (std::size_t i = values.size() - window; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || std::abs(values[i] - last) > tol) return out;
    }
    out.stabilized = true;
    return out;
}

/// A sampled sequence (abscissa, value) with its limit estimate.
struct Series {
    std::vector<std::pair<double, double>> points;
    LimitEstimate limit;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(points.size());
        for (const auto& p : points) v.push_back(p.second);
        return v;
    }
    void finish(double rel_tol, std::size_t window = 3) {
        const auto v = values();
        limit = stabilized_limit(v, rel_tol, window);
    }
};

/// start, start*ratio, ..., count points.
inline std::vector<double> geometric_grid(double start, double ratio, std::size_t count) {
    std::vector<double> grid;
    grid.reserve(count);
    double x = start;
    for (std::size_t i = 0; i < count; ++i) {
        grid.push_back(x);
        x *= ratio;
    }
    return grid;
}

}  // namespace evt
