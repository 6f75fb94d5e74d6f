#ifndef BOHMLAB_PROPAGATOR_HPP
#define BOHMLAB_PROPAGATOR_HPP

#include <span>
#include <string>
#include <vector>

#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Short-time action S_eps(q', q) = m (q'-q)^2 / (2 eps) - eps V((q+q')/2).
double short_time_action(double q, double q_final, double epsilon, const Potential& pot,
                         const PhysicalParams& params);

// Momentum transition amplitudes p_eps = -dS/dq, p'_eps = +dS/dq' (analytic
// gradients of the short-time action).
struct MomentumTAs {
    double p_initial = 0.0;  // -dS_eps/dq
    double p_final = 0.0;    // +dS_eps/dq'
};
MomentumTAs momentum_TAs(double q, double q_final, double epsilon, const Potential& pot,
                         const PhysicalParams& params);

// One-sided slopes about the midpoint Q = (q+q')/2 over a slice of duration
// eps.  Both sign conventions of their combination are retained: the sum
// (which the free-kernel momentum TA equals) and the difference (which
// vanishes identically at the midpoint).
struct MidpointSample {
    double q = 0.0;
    double q_final = 0.0;
    double Q = 0.0;
    double epsilon = 0.0;
    double p_backward = 0.0;  // m (Q - q) / eps
    double p_forward = 0.0;   // m (q' - Q) / eps

    double current_momentum() const { return 0.5 * (p_backward + p_forward); }
    double slope_sum() const { return p_backward + p_forward; }
    double slope_difference() const { return p_forward - p_backward; }
};
MidpointSample midpoint_momentum(double q, double q_final, double epsilon,
                                 const PhysicalParams& params);

// Dense discretization of the slice operator: entry (j,k) =
// N(eps) exp(i S_eps(q_j, q_k)/hbar) dq with N(eps) = sqrt(m/(2 pi i hbar eps)).
class KernelMatrix {
  public:
    KernelMatrix(SpatialGrid grid, double epsilon);

    const SpatialGrid& grid() const { return grid_; }
    double epsilon() const { return epsilon_; }
    std::size_t size() const { return grid_.n_points; }

    cplx& at(std::size_t row, std::size_t col) { return values_[row * size() + col]; }
    const cplx& at(std::size_t row, std::size_t col) const { return values_[row * size() + col]; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }

    // Displacement of the first aliased image of a source under one
    // application: 2 pi hbar eps / (m dq).  Quadrature of the unit-modulus
    // kernel is only faithful when this clears the occupied region.
    double alias_displacement(const PhysicalParams& params) const;

    const std::vector<std::string>& warnings() const { return warnings_; }
    std::vector<std::string>& warnings() { return warnings_; }

    WaveField apply(const WaveField& psi) const;

  private:
    SpatialGrid grid_;
    double epsilon_ = 0.0;
    std::vector<cplx> values_;
    std::vector<std::string> warnings_;
};

// Builds the slice kernel.  Throws UnresolvableKernel when
// sqrt(hbar eps/m) < dq/2; records a warning when it is below dq.  With
// `banded`, entries with |q'-q| > 8 sqrt(hbar eps/m) are zeroed.
KernelMatrix build_kernel(const SpatialGrid& grid, double epsilon, const Potential& pot,
                          const PhysicalParams& params, bool banded = false,
                          std::size_t n_threads = 0);

// Matrix product of the slices in time order (kernels[0] acts first).
KernelMatrix compose_chain(std::span<const KernelMatrix> kernels);

// Applies the free-particle slice kernel via zero-padded FFT convolution of
// the Toeplitz symbol; algebraically identical to the dense row sums.
WaveField apply_free_kernel_fft(const SpatialGrid& grid, double epsilon,
                                const PhysicalParams& params, const WaveField& psi);

// Max over sample Gaussian states of || K' K psi - psi ||; reports how far
// the grid operator is from unitary.
double unitarity_deviation(const KernelMatrix& kernel, const PhysicalParams& params,
                           std::size_t n_samples = 4);

}  // namespace bohmlab

#endif
