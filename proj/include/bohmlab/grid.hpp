#ifndef BOHMLAB_GRID_HPP
#define BOHMLAB_GRID_HPP

#include <cstddef>
#include <vector>

#include "bohmlab/errors.hpp"

namespace bohmlab {

// Uniform 1D discretization of configuration space.  Points are
// q_j = q_min + j*dq for j in [0, n_points); q_max itself is not a grid
// point (periodic convention, q_max ~ q_min).
struct SpatialGrid {
    double q_min = 0.0;
    double q_max = 0.0;
    std::size_t n_points = 0;
    double dq = 0.0;

    double q(std::size_t j) const { return q_min + static_cast<double>(j) * dq; }
    double length() const { return q_max - q_min; }

    // Index of the grid point nearest to x, clamped to the grid.
    std::size_t nearest_index(double x) const;

    std::vector<double> points() const;

    bool contains(double x) const { return x >= q_min && x <= q_max; }

    bool operator==(const SpatialGrid&) const = default;
};

// hbar and mass; natural units by default.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
};

bool is_power_of_two(std::size_t n);

// Builds a grid; rejects inverted bounds and non-power-of-two sizes (< 8).
SpatialGrid make_grid(double q_min, double q_max, std::size_t n_points);

PhysicalParams make_params(double hbar, double mass);

}  // namespace bohmlab

#endif
