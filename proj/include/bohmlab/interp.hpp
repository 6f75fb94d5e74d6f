#ifndef BOHMLAB_INTERP_HPP
#define BOHMLAB_INTERP_HPP

#include <cstddef>
#include <vector>

#include "bohmlab/grid.hpp"

namespace bohmlab {

// Catmull-Rom cubic interpolation of a field sampled on a uniform grid.
// Near the grid ends the stencil is clamped (fields of interest vanish there).
inline double cubic_interp(const std::vector<double>& f, const SpatialGrid& grid, double x) {
    const std::size_t n = f.size();
    double u = (x - grid.q_min) / grid.dq;
    if (u <= 0.0) return f.front();
    if (u >= static_cast<double>(n - 1)) return f.back();
    std::size_t j = static_cast<std::size_t>(u);
    if (j > n - 2) j = n - 2;
    const double t = u - static_cast<double>(j);

    const double p1 = f[j];
    const double p2 = f[j + 1];
    const double p0 = j > 0 ? f[j - 1] : p1;
    const double p3 = j + 2 < n ? f[j + 2] : p2;

    const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    const double c = -0.5 * p0 + 0.5 * p2;
    return ((a * t + b) * t + c) * t + p1;
}

inline double linear_interp(const std::vector<double>& f, const SpatialGrid& grid, double x) {
    const std::size_t n = f.size();
    double u = (x - grid.q_min) / grid.dq;
    if (u <= 0.0) return f.front();
    if (u >= static_cast<double>(n - 1)) return f.back();
    const auto j = static_cast<std::size_t>(u);
    const double t = u - static_cast<double>(j);
    return (1.0 - t) * f[j] + t * f[j + 1];
}

}  // namespace bohmlab

#endif
