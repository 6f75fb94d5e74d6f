#include "bohmlab/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bohmlab {

namespace {

void check_support(const SpatialGrid& grid, double center, double width, const char* who) {
    if (!(width > 0.0)) throw Error(std::string(who) + ": width must be positive");
    if (center - 6.0 * width < grid.q_min || center + 6.0 * width > grid.q_max)
        throw PacketEscapesGrid(std::string(who) + ": packet support [center +- 6 width] = [" +
                                std::to_string(center - 6.0 * width) + ", " +
                                std::to_string(center + 6.0 * width) +
                                "] exceeds the grid bounds");
}

}  // namespace

WaveField gaussian_packet(const SpatialGrid& grid, const PhysicalParams& params,
                          double center, double width, double p0) {
    check_support(grid, center, width, "gaussian_packet");
    WaveField psi;
    psi.grid = grid;
    psi.values.resize(grid.n_points);
    const double inv4w2 = 1.0 / (4.0 * width * width);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double q = grid.q(j);
        const double x = q - center;
        psi.values[j] = std::exp(cplx(-x * x * inv4w2, p0 * q / params.hbar));
    }
    psi.normalize();
    return psi;
}

WaveField two_packet_superposition(const SpatialGrid& grid, const PhysicalParams& params,
                                   double sep, double width, double p0a, double p0b) {
    if (!(sep > 0.0)) throw Error("two_packet_superposition: sep must be positive");
    check_support(grid, -0.5 * sep, width, "two_packet_superposition");
    check_support(grid, +0.5 * sep, width, "two_packet_superposition");
    WaveField psi;
    psi.grid = grid;
    psi.values.resize(grid.n_points);
    const double inv4w2 = 1.0 / (4.0 * width * width);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double q = grid.q(j);
        const double xa = q + 0.5 * sep;
        const double xb = q - 0.5 * sep;
        psi.values[j] = std::exp(cplx(-xa * xa * inv4w2, p0a * q / params.hbar)) +
                        std::exp(cplx(-xb * xb * inv4w2, p0b * q / params.hbar));
    }
    psi.normalize();
    return psi;
}

WaveField coherent_state(const SpatialGrid& grid, const PhysicalParams& params,
                         double omega, double displacement, double t) {
    if (!(omega > 0.0)) throw Error("coherent_state: omega must be positive");
    const double m = params.mass;
    const double hbar = params.hbar;
    const double qc = displacement * std::cos(omega * t);
    const double pc = -m * displacement * omega * std::sin(omega * t);
    const double sigma = std::sqrt(hbar / (2.0 * m * omega));  // position spread
    check_support(grid, qc, sigma, "coherent_state");

    WaveField psi;
    psi.grid = grid;
    psi.time = t;
    psi.values.resize(grid.n_points);
    const double amp = std::pow(m * omega / (std::numbers::pi * hbar), 0.25);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double q = grid.q(j);
        const double x = q - qc;
        const double re = -m * omega * x * x / (2.0 * hbar);
        const double im = (pc * q - 0.5 * hbar * omega * t - 0.5 * pc * qc) / hbar;
        psi.values[j] = amp * std::exp(cplx(re, im));
    }
    return psi;
}

WaveField harmonic_ground_state(const SpatialGrid& grid, const PhysicalParams& params,
                                double omega) {
    return coherent_state(grid, params, omega, 0.0, 0.0);
}

}  // namespace bohmlab
