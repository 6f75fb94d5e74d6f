#ifndef BOHMLAB_PICTURE_HPP
#define BOHMLAB_PICTURE_HPP

#include <utility>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

enum class PhaseSource { FromState, Classical };
enum class VDirection { Forward, Adjoint };

// Action-valued multiplier phase S_c(q) for the unitary V = exp(i S_c / hbar).
// Closed-form phases carry their exact gradient; state-derived phases fall
// back to local differences of the bridged action.
struct ActionPhase {
    SpatialGrid grid;
    double time = 0.0;
    PhaseSource source = PhaseSource::Classical;
    std::vector<double> S_c;
    std::vector<double> slope;  // dS_c/dq when analytic_slope
    bool analytic_slope = false;

    std::vector<double> gradient() const;
};

// Phase taken from the unwrapped action of a polar field; masked gaps are
// bridged linearly.
ActionPhase action_phase_from_state(const PolarField& polar);

// S_c(q) = c * q + constant, with its exact gradient.
ActionPhase action_phase_linear(const SpatialGrid& grid, double c, double constant = 0.0);

// S_c(q) = curvature * q^2 / 2 + slope * q, with its exact gradient.
ActionPhase action_phase_quadratic(const SpatialGrid& grid, double curvature, double slope);

// Pointwise multiplication by exp(+i S_c/hbar) (Forward) or its conjugate
// (Adjoint).  Norm is preserved exactly.
WaveField apply_V(const WaveField& psi, const ActionPhase& phase, VDirection direction,
                  const PhysicalParams& params);

// p_D = -i hbar d/dq + dS_c/dq applied to psi; the state derivative is
// spectral, the phase gradient comes from ActionPhase::gradient().
WaveField transformed_momentum(const WaveField& psi, const ActionPhase& phase,
                               const PhysicalParams& params);

// p_S = -i hbar d/dq applied spectrally.
WaveField momentum_apply(const WaveField& psi, const PhysicalParams& params);

// <a|op b> with the grid quadrature weight.
cplx inner_product(const WaveField& a, const WaveField& b);

// Residuals of the real/imaginary split of the evolution equation on a
// snapshot sequence; evaluated on the middle adjacent pair.
std::pair<ResidualField, ResidualField> split_real_imaginary(
    const std::vector<WaveField>& psi_seq, const Potential& pot, const PhysicalParams& params,
    double node_threshold = 1e-6);

// Classical endpoint data (q,p) -> (q', p') with the action along the path.
struct ClassicalEndpointData {
    double q = 0.0;
    double p = 0.0;
    double q_final = 0.0;
    double p_final = 0.0;
    double action = 0.0;
};

// Free and harmonic use closed forms; other potentials integrate the
// Hamiltonian flow with RK4 and accumulate the Lagrangian.
ClassicalEndpointData classical_endpoints(const Potential& pot, double q, double p, double t,
                                          const PhysicalParams& params);

// Newtonian trajectory under V alone (the quantum-potential force removed),
// sampled at n_steps+1 uniformly spaced times.
std::vector<double> newtonian_trajectory(const Potential& pot, const PhysicalParams& params,
                                         double q0, double p0, double t, std::size_t n_steps);

// Two-point action S(q, q'; t) by shooting over the initial momentum.
double two_point_action(const Potential& pot, double q, double q_final, double t,
                        const PhysicalParams& params);

// Measured errors of the conjugation identities <V'psi|V' A V|V'psi> =
// <psi|A|psi> for A in {q, p, q^2, p^2}, plus unitarity diagnostics.
struct PictureCheckReport {
    double err_q = 0.0;
    double err_p = 0.0;
    double err_q2 = 0.0;
    double err_p2 = 0.0;
    double norm_deviation = 0.0;        // | ||V'psi|| - ||psi|| |
    double roundtrip_deviation = 0.0;   // max |(V V' psi - psi)|
};

PictureCheckReport picture_check(const WaveField& psi, const ActionPhase& phase,
                                 const PhysicalParams& params);

}  // namespace bohmlab

#endif
