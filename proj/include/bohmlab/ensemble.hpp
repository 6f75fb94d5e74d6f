#ifndef BOHMLAB_ENSEMBLE_HPP
#define BOHMLAB_ENSEMBLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Wave function in the momentum representation, symmetric convention
//   psi(q) = (2 pi hbar)^(-1/2) integral phi(p) e^{ipq/hbar} dp.
// p_grid is monotone from -p_nyquist to p_nyquist - dp.
struct MomentumRepresentation {
    std::vector<double> p_grid;
    std::vector<cplx> phi;
    double time = 0.0;
    double dp = 0.0;
    double hbar = 1.0;

    double norm_squared() const;  // sum |phi|^2 dp
};

MomentumRepresentation to_momentum_rep(const WaveField& psi, const PhysicalParams& params);
WaveField from_momentum_rep(const MomentumRepresentation& rep, const SpatialGrid& grid,
                            const PhysicalParams& params);

// Mean momentum field from the discretized double momentum integral
//   rho(Q) P(Q) = (2 pi hbar)^-1 sum_{p,p'} (p+p')/2 phi*(p') phi(p)
//                 e^{i(p-p')Q/hbar} dp dp'
// (grouped over the index difference p - p'), divided by rho off-mask.
MomentumField moyal_mean_momentum(const WaveField& psi, const PhysicalParams& params,
                                  double node_threshold = 1e-6);

enum class DriftKind { NelsonForward };

struct PathEnsembleOptions {
    double node_threshold = 1e-6;
    // |drift| clamp; zero selects half the grid Nyquist velocity
    double drift_clamp = 0.0;
    // keep every store_stride-th step in `positions`
    std::size_t store_stride = 1;
    // time indices at which per-path symmetric-difference velocities are kept
    std::vector<std::size_t> stat_indices;
    // spatial binning of the per-step velocity table
    double bin_width_cells = 4.0;
    std::size_t n_threads = 0;
};

// Per-step spatially binned sums of the symmetric-difference velocity,
// accumulated during sampling; drives trajectory re-integration from the
// ensemble alone.
struct BinnedVelocityTable {
    double bin_lo = 0.0;
    double bin_width = 0.0;
    std::size_t n_bins = 0;
    // [step][bin]
    std::vector<std::vector<double>> sum_v;
    std::vector<std::vector<std::uint32_t>> count;

    // mean velocity near x at a step, falling back to the nearest occupied bin
    std::optional<double> mean_velocity(std::size_t step, double x) const;
};

// Per-path record of the difference velocities at one time index.  The
// one-sided quotients are the discrete forward/backward derivatives; their
// conditional means split into current +- osmotic velocity, while the
// symmetric mean is the current velocity alone.
struct StatSlice {
    std::size_t t_index = 0;
    std::vector<double> position;           // X_k per live path
    std::vector<double> velocity;           // (X_{k+1} - X_{k-1}) / (2 dt)
    std::vector<double> velocity_forward;   // (X_{k+1} - X_k) / dt
    std::vector<double> velocity_backward;  // (X_k - X_{k-1}) / dt
};

struct PathEnsemble {
    std::size_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t rng_seed = 0;
    DriftKind drift_kind = DriftKind::NelsonForward;

    std::vector<double> times;      // stored times (store_stride thinning)
    std::vector<std::size_t> time_indices;
    std::vector<double> positions;  // row-major [n_paths][times.size()]
    std::vector<bool> escaped;

    std::vector<StatSlice> stat_slices;
    BinnedVelocityTable table;

    double position(std::size_t path, std::size_t stored_idx) const {
        return positions[path * times.size() + stored_idx];
    }
};

// Nelson forward diffusion through the snapshot sequence:
//   X_{k+1} = X_k + b(X_k, t_k) dt + sqrt(hbar dt / m) xi,
// with b = P/m + hbar (drho/dq) / (2 m rho) and initial positions drawn from
// |psi_0|^2.  Reproducible bit-exactly from (rng_seed, options) for any
// worker count; a path leaving the grid is terminated and flagged.
PathEnsemble sample_paths(const std::vector<WaveField>& states, std::size_t n_paths,
                          std::uint64_t rng_seed, const PhysicalParams& params,
                          const PathEnsembleOptions& options = {});

struct BinSpec {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
};

// Conditional statistics of the stored difference velocities at a time
// index.  Bins with no samples are reported with count 0.  The one-sided
// means are diagnostics; comparisons against P/m use mean_velocity.
struct ConditionalStats {
    std::vector<double> bin_centers;
    double bin_width = 0.0;
    std::vector<double> mean_velocity;
    std::vector<double> std_error;
    std::vector<double> mean_forward;
    std::vector<double> mean_backward;
    std::vector<std::uint32_t> counts;
};

ConditionalStats conditional_mean_velocity(const PathEnsemble& ens, std::size_t t_index,
                                           const BinSpec& bins);

// Inverse-CDF sampler over a density profile on a grid.
class DensitySampler {
  public:
    DensitySampler(const SpatialGrid& grid, const std::vector<double>& rho);
    double sample(double u) const;  // u in (0,1)

  private:
    SpatialGrid grid_;
    std::vector<double> cdf_;
};

// L1 distance between the histogram of samples (bin-averaged density) and a
// reference density profile on its grid.
double histogram_l1_distance(const std::vector<double>& samples, const SpatialGrid& grid,
                             const std::vector<double>& rho, double bin_width);

}  // namespace bohmlab

#endif
