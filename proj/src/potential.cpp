#include "bohmlab/potential.hpp"

#include <algorithm>
#include <cmath>

namespace bohmlab {

Potential Potential::free() {
    return Potential{};
}

Potential Potential::harmonic(double omega) {
    if (!(omega > 0.0)) throw Error("Potential::harmonic: omega must be positive");
    Potential p;
    p.kind_ = PotentialKind::Harmonic;
    p.omega_ = omega;
    return p;
}

Potential Potential::barrier(double height, double width, double center) {
    if (!(width > 0.0)) throw Error("Potential::barrier: width must be positive");
    Potential p;
    p.kind_ = PotentialKind::Barrier;
    p.height_ = height;
    p.width_ = width;
    p.center_ = center;
    return p;
}

Potential Potential::custom(const SpatialGrid& grid, std::vector<double> values) {
    if (values.size() != grid.n_points)
        throw Error("Potential::custom: table size does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw Error("Potential::custom: non-finite table entry");
    Potential p;
    p.kind_ = PotentialKind::Custom;
    p.tab_grid_ = grid;
    p.tab_values_ = std::move(values);
    return p;
}

double Potential::value(double q, const PhysicalParams& params) const {
    switch (kind_) {
        case PotentialKind::Free:
            return 0.0;
        case PotentialKind::Harmonic:
            return 0.5 * params.mass * omega_ * omega_ * q * q;
        case PotentialKind::Barrier:
            return std::abs(q - center_) <= 0.5 * width_ ? height_ : 0.0;
        case PotentialKind::Custom: {
            const double f = (q - tab_grid_.q_min) / tab_grid_.dq;
            if (f <= 0.0) return tab_values_.front();
            const auto n = tab_grid_.n_points;
            if (f >= static_cast<double>(n - 1)) return tab_values_.back();
            const auto j = static_cast<std::size_t>(f);
            const double t = f - static_cast<double>(j);
            return (1.0 - t) * tab_values_[j] + t * tab_values_[j + 1];
        }
    }
    return 0.0;
}

double Potential::derivative(double q, const PhysicalParams& params) const {
    switch (kind_) {
        case PotentialKind::Free:
            return 0.0;
        case PotentialKind::Harmonic:
            return params.mass * omega_ * omega_ * q;
        case PotentialKind::Barrier:
            return 0.0;  // piecewise constant away from the edges
        case PotentialKind::Custom: {
            const double h = tab_grid_.dq;
            return (value(q + h, params) - value(q - h, params)) / (2.0 * h);
        }
    }
    return 0.0;
}

std::vector<double> Potential::tabulate(const SpatialGrid& grid,
                                        const PhysicalParams& params) const {
    std::vector<double> out(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) out[j] = value(grid.q(j), params);
    return out;
}

double Potential::max_abs(const SpatialGrid& grid, const PhysicalParams& params) const {
    double m = 0.0;
    for (std::size_t j = 0; j < grid.n_points; ++j)
        m = std::max(m, std::abs(value(grid.q(j), params)));
    return m;
}

std::string Potential::describe() const {
    switch (kind_) {
        case PotentialKind::Free:
            return "free";
        case PotentialKind::Harmonic:
            return "harmonic(omega=" + std::to_string(omega_) + ")";
        case PotentialKind::Barrier:
            return "barrier(height=" + std::to_string(height_) +
                   ", width=" + std::to_string(width_) + ", center=" + std::to_string(center_) + ")";
        case PotentialKind::Custom:
            return "custom[" + std::to_string(tab_values_.size()) + " points]";
    }
    return "?";
}

}  // namespace bohmlab
