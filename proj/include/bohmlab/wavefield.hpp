#ifndef BOHMLAB_WAVEFIELD_HPP
#define BOHMLAB_WAVEFIELD_HPP

#include <complex>
#include <vector>

#include "bohmlab/fft.hpp"
#include "bohmlab/grid.hpp"

namespace bohmlab {

// Complex wave function sampled on a grid at one instant.
struct WaveField {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<cplx> values;

    double norm() const;          // sqrt(sum |psi|^2 dq)
    double density(std::size_t j) const { return std::norm(values[j]); }
    std::vector<double> density_profile() const;

    // Rescales to unit discrete norm.
    void normalize();
};

// Amplitude/action pair R, S with psi = R exp(iS/hbar) off the node mask.
// masked_values keeps the raw complex samples at masked points so the
// decomposition stays lossless there.  hbar records the action scale S is
// expressed in.
struct PolarField {
    SpatialGrid grid;
    double time = 0.0;
    double hbar = 1.0;
    std::vector<double> R;
    std::vector<double> S;
    std::vector<bool> node_mask;
    std::vector<cplx> masked_values;

    std::size_t masked_count() const;
};

double l2_distance(const WaveField& a, const WaveField& b);

// R = |psi|, S = hbar*arg(psi) unwrapped outward from the global density
// maximum; points with R < node_threshold * max(R) are masked and excluded
// from the unwrapping continuity.  Throws AllPointsMasked when the threshold
// swallows the whole field.
PolarField polar_decompose(const WaveField& psi, const PhysicalParams& params = {},
                           double node_threshold = 1e-6);

// Inverse of polar_decompose; masked points are restored from the stored
// residual samples.
WaveField polar_recompose(const PolarField& polar);

// Unwrapped action with masked gaps bridged linearly between the nearest
// valid neighbors (edge gaps extended flat).
std::vector<double> bridged_action(const PolarField& polar);

// dS/dq of the bridged unwrapped action, by local fourth-order differences.
// S is not grid-periodic, so spectral differentiation does not apply to it.
std::vector<double> action_gradient(const PolarField& polar);

// Points where the action gradient is trustworthy: the difference stencil is
// unmasked, per-cell phase steps stay below max_step_rad (branch choices are
// ambiguous as the step approaches pi), and the fourth difference of the
// phase — the truncation-error scale of the local derivative — stays small.
std::vector<bool> gradient_resolved_mask(const PolarField& polar, double max_step_rad = 0.35,
                                         double max_fourth_diff_rad = 1e-6);

}  // namespace bohmlab

#endif
