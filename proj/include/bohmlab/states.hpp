#ifndef BOHMLAB_STATES_HPP
#define BOHMLAB_STATES_HPP

#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Normalized Gaussian packet psi ~ exp(-(q-center)^2/(4 width^2) + i p0 q / hbar).
// Rejects packets whose +-6 width support falls outside the grid.
WaveField gaussian_packet(const SpatialGrid& grid, const PhysicalParams& params,
                          double center, double width, double p0);

// Equal-weight sum of packets at -sep/2 (momentum p0a) and +sep/2 (momentum
// p0b), normalized.
WaveField two_packet_superposition(const SpatialGrid& grid, const PhysicalParams& params,
                                   double sep, double width, double p0a, double p0b);

// Exact coherent state of the harmonic oscillator with frequency omega,
// displaced by `displacement` at t=0, sampled at time t:
//   q_c(t) = a cos(wt),  p_c(t) = -m a w sin(wt)
//   psi = (mw/pi hbar)^(1/4) exp[-mw (q-q_c)^2 / 2hbar
//         + i (p_c q - hbar w t / 2 - p_c q_c / 2) / hbar]
WaveField coherent_state(const SpatialGrid& grid, const PhysicalParams& params,
                         double omega, double displacement, double t);

// Harmonic-oscillator ground state (coherent state with zero displacement).
WaveField harmonic_ground_state(const SpatialGrid& grid, const PhysicalParams& params,
                                double omega);

}  // namespace bohmlab

#endif
