#include "bohmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bohmlab {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t SpatialGrid::nearest_index(double x) const {
    const double f = (x - q_min) / dq;
    const long j = std::lround(f);
    if (j < 0) return 0;
    if (j >= static_cast<long>(n_points)) return n_points - 1;
    return static_cast<std::size_t>(j);
}

std::vector<double> SpatialGrid::points() const {
    std::vector<double> qs(n_points);
    for (std::size_t j = 0; j < n_points; ++j) qs[j] = q(j);
    return qs;
}

SpatialGrid make_grid(double q_min, double q_max, std::size_t n_points) {
    if (!(q_max > q_min))
        throw InvertedBounds("make_grid: q_max must exceed q_min (got [" +
                             std::to_string(q_min) + ", " + std::to_string(q_max) + "])");
    if (n_points < 8 || !is_power_of_two(n_points))
        throw NotPowerOfTwo("make_grid: n_points must be a power of two >= 8 (got " +
                            std::to_string(n_points) + ")");
    SpatialGrid g;
    g.q_min = q_min;
    g.q_max = q_max;
    g.n_points = n_points;
    g.dq = (q_max - q_min) / static_cast<double>(n_points);
    return g;
}

PhysicalParams make_params(double hbar, double mass) {
    if (!(hbar > 0.0) || !(mass > 0.0))
        throw Error("make_params: hbar and mass must be strictly positive");
    return PhysicalParams{hbar, mass};
}

}  // namespace bohmlab
