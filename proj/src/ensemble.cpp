#include "bohmlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bohmlab/interp.hpp"
#include "bohmlab/parallel.hpp"
#include "bohmlab/rng.hpp"

namespace bohmlab {

double MomentumRepresentation::norm_squared() const {
    double s = 0.0;
    for (const auto& z : phi) s += std::norm(z);
    return s * dp;
}

MomentumRepresentation to_momentum_rep(const WaveField& psi, const PhysicalParams& params) {
    const std::size_t n = psi.values.size();
    const SpatialGrid& grid = psi.grid;
    const double hbar = params.hbar;

    std::vector<cplx> hat = psi.values;
    fft(hat);

    const auto k = wavenumbers(grid);
    const double scale = grid.dq / std::sqrt(2.0 * std::numbers::pi * hbar);

    MomentumRepresentation rep;
    rep.time = psi.time;
    rep.hbar = hbar;
    rep.dp = 2.0 * std::numbers::pi * hbar / grid.length();
    rep.p_grid.resize(n);
    rep.phi.resize(n);

    // reorder to monotone p: DFT indices n/2..n-1 carry negative wavenumbers
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = (j + n / 2) % n;
        const double p = hbar * k[src];
        rep.p_grid[j] = p;
        rep.phi[j] = scale * hat[src] * std::exp(cplx(0.0, -k[src] * grid.q_min));
    }
    return rep;
}

WaveField from_momentum_rep(const MomentumRepresentation& rep, const SpatialGrid& grid,
                            const PhysicalParams& params) {
    const std::size_t n = rep.phi.size();
    if (n != grid.n_points) throw GridMismatch("from_momentum_rep: size mismatch");
    const double hbar = params.hbar;

    std::vector<cplx> hat(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = (j + n / 2) % n;
        const double p = rep.p_grid[src];
        hat[j] = rep.phi[src] * std::exp(cplx(0.0, p * grid.q_min / hbar));
    }
    ifft(hat);
    WaveField psi;
    psi.grid = grid;
    psi.time = rep.time;
    psi.values.resize(n);
    const double scale = std::sqrt(2.0 * std::numbers::pi * hbar) / grid.dq;
    for (std::size_t j = 0; j < n; ++j) psi.values[j] = scale * hat[j];
    return psi;
}

MomentumField moyal_mean_momentum(const WaveField& psi, const PhysicalParams& params,
                                  double node_threshold) {
    const MomentumRepresentation rep = to_momentum_rep(psi, params);
    const std::size_t n = rep.phi.size();
    const double hbar = params.hbar;

    // W[d] = sum_b (p_{b+d} + p_b)/2 * conj(phi_b) * phi_{b+d},
    // rho P(Q) = dp^2/(2 pi hbar) * sum_d W[d] e^{i d dp Q / hbar}
    std::vector<cplx> W(2 * n - 1, cplx(0.0, 0.0));
    for (std::ptrdiff_t d = -(static_cast<std::ptrdiff_t>(n) - 1);
         d < static_cast<std::ptrdiff_t>(n); ++d) {
        cplx acc = 0.0;
        const std::size_t b_lo = d < 0 ? static_cast<std::size_t>(-d) : 0;
        const std::size_t b_hi = d > 0 ? n - static_cast<std::size_t>(d) : n;
        for (std::size_t b = b_lo; b < b_hi; ++b) {
            const std::size_t a = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(b) + d);
            acc += 0.5 * (rep.p_grid[a] + rep.p_grid[b]) * std::conj(rep.phi[b]) * rep.phi[a];
        }
        W[static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(n) - 1)] = acc;
    }

    const double prefactor = rep.dp * rep.dp / (2.0 * std::numbers::pi * hbar);

    MomentumField out;
    out.grid = psi.grid;
    out.time = psi.time;
    out.P_B.assign(psi.grid.n_points, 0.0);
    out.valid_mask.assign(psi.grid.n_points, true);

    double rho_max = 0.0;
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        rho_max = std::max(rho_max, std::norm(psi.values[j]));
    const double cutoff = node_threshold * node_threshold * rho_max;

    for (std::size_t j = 0; j < psi.grid.n_points; ++j) {
        const double rho = std::norm(psi.values[j]);
        if (rho < cutoff || rho == 0.0) {
            out.valid_mask[j] = false;
            continue;
        }
        const double Q = psi.grid.q(j);
        cplx sum = 0.0;
        for (std::size_t di = 0; di < W.size(); ++di) {
            const double r =
                rep.dp * (static_cast<double>(di) - static_cast<double>(n - 1));
            sum += W[di] * std::exp(cplx(0.0, r * Q / hbar));
        }
        out.P_B[j] = prefactor * sum.real() / rho;
    }
    return out;
}

std::optional<double> BinnedVelocityTable::mean_velocity(std::size_t step, double x) const {
    if (step >= sum_v.size() || n_bins == 0) return std::nullopt;
    const auto& counts = count[step];
    const auto& sums = sum_v[step];
    const double f = (x - bin_lo) / bin_width;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor(f));
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n_bins) - 1);
    if (counts[static_cast<std::size_t>(j)] > 0)
        return sums[static_cast<std::size_t>(j)] / counts[static_cast<std::size_t>(j)];
    // nearest occupied bin
    for (std::ptrdiff_t off = 1; off < static_cast<std::ptrdiff_t>(n_bins); ++off) {
        const std::ptrdiff_t left = j - off, right = j + off;
        if (left >= 0 && counts[static_cast<std::size_t>(left)] > 0)
            return sums[static_cast<std::size_t>(left)] / counts[static_cast<std::size_t>(left)];
        if (right < static_cast<std::ptrdiff_t>(n_bins) &&
            counts[static_cast<std::size_t>(right)] > 0)
            return sums[static_cast<std::size_t>(right)] / counts[static_cast<std::size_t>(right)];
    }
    return std::nullopt;
}

DensitySampler::DensitySampler(const SpatialGrid& grid, const std::vector<double>& rho)
    : grid_(grid), cdf_(rho.size(), 0.0) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        acc += std::max(0.0, rho[j]) * grid.dq;
        cdf_[j] = acc;
    }
    if (!(acc > 0.0)) throw Error("DensitySampler: zero density");
    for (auto& c : cdf_) c /= acc;
}

double DensitySampler::sample(double u) const {
    // cdf_[j] holds the mass up to the right edge of cell j, the cell being
    // [q_j - dq/2, q_j + dq/2)
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
    if (j >= cdf_.size()) j = cdf_.size() - 1;
    const double c0 = j > 0 ? cdf_[j - 1] : 0.0;
    const double c1 = cdf_[j];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    const double x = grid_.q(j) + (t - 0.5) * grid_.dq;
    return std::clamp(x, grid_.q_min, grid_.q_max);
}

PathEnsemble sample_paths(const std::vector<WaveField>& states, std::size_t n_paths,
                          std::uint64_t rng_seed, const PhysicalParams& params,
                          const PathEnsembleOptions& options) {
    if (states.size() < 2) throw Error("sample_paths: need at least two snapshots");
    if (n_paths < 1) throw Error("sample_paths: n_paths must be >= 1");

    const FlowTable tab = build_flow_table(states, params, options.node_threshold, true);
    const SpatialGrid& grid = tab.grid;
    const std::size_t n_steps = states.size() - 1;
    const double dt = tab.dt;
    const double hbar = params.hbar;
    const double m = params.mass;

    const double clamp_v = options.drift_clamp > 0.0
                               ? options.drift_clamp
                               : 0.5 * std::numbers::pi * hbar / (m * grid.dq);

    // per-step drift fields b = v + hbar/(m) * (drho / 2 rho)
    std::vector<std::vector<double>> drift(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        drift[s].resize(grid.n_points);
        for (std::size_t j = 0; j < grid.n_points; ++j) {
            const double b = tab.velocity[s][j] + hbar * tab.log_drho[s][j] / m;
            drift[s][j] = std::clamp(b, -clamp_v, clamp_v);
        }
    }

    const DensitySampler sampler(grid, states.front().density_profile());

    PathEnsemble ens;
    ens.n_paths = n_paths;
    ens.dt = dt;
    ens.rng_seed = rng_seed;

    const std::size_t stride = std::max<std::size_t>(1, options.store_stride);
    for (std::size_t s = 0; s < states.size(); s += stride) {
        ens.time_indices.push_back(s);
        ens.times.push_back(states[s].time);
    }
    const std::size_t n_stored = ens.times.size();
    ens.positions.assign(n_paths * n_stored, 0.0);
    ens.escaped.assign(n_paths, false);

    // stat slices: sorted valid interior indices
    std::vector<std::size_t> stat_idx = options.stat_indices;
    std::sort(stat_idx.begin(), stat_idx.end());
    stat_idx.erase(std::unique(stat_idx.begin(), stat_idx.end()), stat_idx.end());
    for (std::size_t si : stat_idx)
        if (si == 0 || si >= n_steps)
            throw Error("sample_paths: stat index must be interior to the run");
    ens.stat_slices.resize(stat_idx.size());
    for (auto& slice : ens.stat_slices) {
        slice.position.assign(n_paths, std::numeric_limits<double>::quiet_NaN());
        slice.velocity.assign(n_paths, std::numeric_limits<double>::quiet_NaN());
        slice.velocity_forward.assign(n_paths, std::numeric_limits<double>::quiet_NaN());
        slice.velocity_backward.assign(n_paths, std::numeric_limits<double>::quiet_NaN());
    }
    for (std::size_t i = 0; i < stat_idx.size(); ++i) ens.stat_slices[i].t_index = stat_idx[i];

    // binned velocity table, fixed-chunk partial accumulation
    BinnedVelocityTable& table = ens.table;
    table.bin_lo = grid.q_min;
    table.bin_width = options.bin_width_cells * grid.dq;
    table.n_bins = static_cast<std::size_t>(std::ceil(grid.length() / table.bin_width));
    table.sum_v.assign(n_steps, std::vector<double>(table.n_bins, 0.0));
    table.count.assign(n_steps, std::vector<std::uint32_t>(table.n_bins, 0));

    struct ChunkTable {
        std::vector<std::vector<double>> sum_v;
        std::vector<std::vector<std::uint32_t>> count;
    };
    std::vector<ChunkTable> partial(kFixedChunks);

    parallel_chunks(n_paths, options.n_threads, [&](std::size_t chunk, std::size_t b,
                                                    std::size_t e) {
        auto& part = partial[chunk];
        part.sum_v.assign(n_steps, std::vector<double>(table.n_bins, 0.0));
        part.count.assign(n_steps, std::vector<std::uint32_t>(table.n_bins, 0));

        for (std::size_t i = b; i < e; ++i) {
            Xoshiro256 rng(rng_seed, i);
            double x = sampler.sample(rng.uniform());
            double x_prev = x;
            bool alive = true;
            std::size_t stored = 0, stat_cursor = 0;

            auto store_if_due = [&](std::size_t step_idx, double xx) {
                if (stored < n_stored && ens.time_indices[stored] == step_idx) {
                    ens.positions[i * n_stored + stored] = xx;
                    ++stored;
                }
            };
            store_if_due(0, x);

            const double noise_scale = std::sqrt(hbar * dt / m);
            for (std::size_t k = 0; k < n_steps; ++k) {
                double x_next = x;
                if (alive) {
                    const double bdrift = cubic_interp(drift[k], grid, x);
                    x_next = x + bdrift * dt + noise_scale * rng.normal();
                    if (x_next < grid.q_min || x_next > grid.q_max) {
                        x_next = std::clamp(x_next, grid.q_min, grid.q_max);
                        alive = false;
                        ens.escaped[i] = true;
                    }
                }
                // symmetric-difference velocity at interior step k (k >= 1)
                if (k >= 1 && alive) {
                    const double vel = (x_next - x_prev) / (2.0 * dt);
                    const double f = (x - table.bin_lo) / table.bin_width;
                    const auto bin = static_cast<std::ptrdiff_t>(std::floor(f));
                    if (bin >= 0 && bin < static_cast<std::ptrdiff_t>(table.n_bins)) {
                        part.sum_v[k][static_cast<std::size_t>(bin)] += vel;
                        part.count[k][static_cast<std::size_t>(bin)] += 1;
                    }
                    if (stat_cursor < stat_idx.size() && stat_idx[stat_cursor] == k) {
                        ens.stat_slices[stat_cursor].position[i] = x;
                        ens.stat_slices[stat_cursor].velocity[i] = vel;
                        ens.stat_slices[stat_cursor].velocity_forward[i] = (x_next - x) / dt;
                        ens.stat_slices[stat_cursor].velocity_backward[i] = (x - x_prev) / dt;
                        ++stat_cursor;
                    }
                } else if (stat_cursor < stat_idx.size() && stat_idx[stat_cursor] == k) {
                    ++stat_cursor;  // path not alive; slice entry stays NaN
                }
                x_prev = x;
                x = x_next;
                store_if_due(k + 1, x);
            }
        }
    });

    // merge partial tables in fixed chunk order
    for (const auto& part : partial) {
        if (part.sum_v.empty()) continue;
        for (std::size_t k = 0; k < n_steps; ++k) {
            for (std::size_t bb = 0; bb < table.n_bins; ++bb) {
                table.sum_v[k][bb] += part.sum_v[k][bb];
                table.count[k][bb] += part.count[k][bb];
            }
        }
    }

    return ens;
}

ConditionalStats conditional_mean_velocity(const PathEnsemble& ens, std::size_t t_index,
                                           const BinSpec& bins) {
    const StatSlice* slice = nullptr;
    for (const auto& s : ens.stat_slices)
        if (s.t_index == t_index) slice = &s;
    if (slice == nullptr)
        throw Error("conditional_mean_velocity: no stat slice stored at index " +
                    std::to_string(t_index));
    if (!(bins.width > 0.0) || !(bins.hi > bins.lo))
        throw Error("conditional_mean_velocity: invalid bin spec");

    const auto n_bins =
        static_cast<std::size_t>(std::ceil((bins.hi - bins.lo) / bins.width));
    ConditionalStats st;
    st.bin_width = bins.width;
    st.bin_centers.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j)
        st.bin_centers[j] = bins.lo + (static_cast<double>(j) + 0.5) * bins.width;
    st.mean_velocity.assign(n_bins, 0.0);
    st.std_error.assign(n_bins, 0.0);
    st.mean_forward.assign(n_bins, 0.0);
    st.mean_backward.assign(n_bins, 0.0);
    st.counts.assign(n_bins, 0);

    std::vector<double> sum(n_bins, 0.0), sum2(n_bins, 0.0);
    std::vector<double> sum_f(n_bins, 0.0), sum_b(n_bins, 0.0);
    for (std::size_t i = 0; i < slice->position.size(); ++i) {
        const double x = slice->position[i];
        const double v = slice->velocity[i];
        if (std::isnan(x) || std::isnan(v)) continue;
        const double f = (x - bins.lo) / bins.width;
        const auto j = static_cast<std::ptrdiff_t>(std::floor(f));
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(n_bins)) continue;
        const auto jj = static_cast<std::size_t>(j);
        sum[jj] += v;
        sum2[jj] += v * v;
        sum_f[jj] += slice->velocity_forward[i];
        sum_b[jj] += slice->velocity_backward[i];
        st.counts[jj] += 1;
    }
    for (std::size_t j = 0; j < n_bins; ++j) {
        if (st.counts[j] == 0) continue;
        const double c = st.counts[j];
        st.mean_velocity[j] = sum[j] / c;
        st.mean_forward[j] = sum_f[j] / c;
        st.mean_backward[j] = sum_b[j] / c;
        if (st.counts[j] > 1) {
            const double var =
                std::max(0.0, (sum2[j] - sum[j] * sum[j] / c) / (c - 1.0));
            st.std_error[j] = std::sqrt(var / c);
        }
    }
    return st;
}

double histogram_l1_distance(const std::vector<double>& samples, const SpatialGrid& grid,
                             const std::vector<double>& rho, double bin_width) {
    const auto n_bins = static_cast<std::size_t>(std::ceil(grid.length() / bin_width));
    std::vector<double> hist(n_bins, 0.0);
    for (double x : samples) {
        const double f = (x - grid.q_min) / bin_width;
        auto j = static_cast<std::ptrdiff_t>(std::floor(f));
        j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n_bins) - 1);
        hist[static_cast<std::size_t>(j)] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * bin_width);
    for (auto& h : hist) h *= norm;

    // bin-average the reference density over the grid points in each bin
    std::vector<double> ref(n_bins, 0.0);
    std::vector<std::size_t> nref(n_bins, 0);
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double f = (grid.q(j) - grid.q_min) / bin_width;
        auto bb = static_cast<std::ptrdiff_t>(std::floor(f));
        bb = std::clamp<std::ptrdiff_t>(bb, 0, static_cast<std::ptrdiff_t>(n_bins) - 1);
        ref[static_cast<std::size_t>(bb)] += rho[j];
        nref[static_cast<std::size_t>(bb)] += 1;
    }
    for (std::size_t j = 0; j < n_bins; ++j)
        if (nref[j] > 0) ref[j] /= static_cast<double>(nref[j]);

    double l1 = 0.0;
    for (std::size_t j = 0; j < n_bins; ++j) l1 += std::abs(hist[j] - ref[j]) * bin_width;
    return l1;
}

}  // namespace bohmlab
