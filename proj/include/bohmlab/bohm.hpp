#ifndef BOHMLAB_BOHM_HPP
#define BOHMLAB_BOHM_HPP

#include <vector>

#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Local momentum field P_B(q) with a validity mask that switches off near
// nodes of the density.
struct MomentumField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> P_B;
    std::vector<bool> valid_mask;
};

struct QuantumPotentialField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> Q_pot;
    std::vector<bool> valid_mask;
};

// Pointwise residual of a field equation plus the usual summary norms,
// evaluated over the valid (off-mask) points only.
struct ResidualField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> residual;
    std::vector<bool> valid_mask;
    double max_abs = 0.0;
    double l2 = 0.0;
};

struct TrajectorySet {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;  // [n_traj][n_times]
    std::vector<double> seeds;
    std::vector<bool> frozen;  // trajectory entered a node halo and was stopped

    std::size_t n_traj() const { return positions.size(); }
};

// P_B = hbar Im(psi* dpsi/dq) / |psi|^2 (spectral derivative); equals dS/dq
// away from nodes.
MomentumField local_momentum(const WaveField& psi, const PhysicalParams& params,
                             double node_threshold = 1e-6);

// Q = -(hbar^2/2m) (d^2R/dq^2) / R off the node mask.
QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalParams& params);

// Residual of dS/dt + (dS/dq)^2/2m + Q + V = 0 on a snapshot pair, with dS/dt
// by centered difference.  The two unwrapped S fields are aligned by the
// global 2*pi*hbar shift that minimizes their mean difference.
ResidualField qhj_residual(const PolarField& polar_t0, const PolarField& polar_t1,
                           const Potential& pot, const PhysicalParams& params);

// Residual of drho/dt + (1/m) d(rho dS/dq)/dq = 0 with the current computed
// as hbar Im(psi* dpsi/dq).
ResidualField continuity_residual(const WaveField& psi_t0, const WaveField& psi_t1,
                                  const PhysicalParams& params, double node_threshold = 1e-6);

// Integrates dq/dt = P_B(q,t)/m with RK4 through the snapshot sequence;
// velocity is cubic in space and linear in time between snapshots.
// Trajectories entering within two grid cells of a node-masked point freeze
// in place and are flagged.
TrajectorySet integrate_trajectories(const std::vector<WaveField>& states,
                                     const std::vector<double>& seeds,
                                     const PhysicalParams& params,
                                     double node_threshold = 1e-6,
                                     std::size_t n_threads = 0);

// Velocity fields and freeze halos precomputed once per snapshot sequence;
// shared by the trajectory integrator and the ensemble sampler.
struct FlowTable {
    SpatialGrid grid;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<std::vector<double>> velocity;    // P_B/m per snapshot
    std::vector<std::vector<double>> log_drho;    // d(rho)/dq / (2 rho) per snapshot
    std::vector<std::vector<bool>> halo;          // node mask dilated by 2 cells

    std::size_t n_times() const { return velocity.size(); }
};

FlowTable build_flow_table(const std::vector<WaveField>& states, const PhysicalParams& params,
                           double node_threshold, bool with_osmotic);

}  // namespace bohmlab

#endif
