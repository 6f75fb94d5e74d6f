#include "bohmlab/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bohmlab/interp.hpp"
#include "bohmlab/parallel.hpp"

namespace bohmlab {

namespace {

void finalize_norms(ResidualField& r) {
    double sum2 = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < r.residual.size(); ++j) {
        if (!r.valid_mask[j]) continue;
        r.max_abs = std::max(r.max_abs, std::abs(r.residual[j]));
        sum2 += r.residual[j] * r.residual[j];
        ++count;
    }
    r.l2 = count > 0 ? std::sqrt(sum2 * r.grid.dq) : 0.0;
}

void check_pair(const SpatialGrid& a, const SpatialGrid& b, double ta, double tb,
                const char* who) {
    if (a != b) throw InconsistentGrids(std::string(who) + ": snapshots on different grids");
    if (!(tb > ta)) throw InconsistentGrids(std::string(who) + ": snapshots not time-ordered");
}

}  // namespace

MomentumField local_momentum(const WaveField& psi, const PhysicalParams& params,
                             double node_threshold) {
    MomentumField out;
    out.grid = psi.grid;
    out.time = psi.time;
    const std::size_t n = psi.values.size();
    out.P_B.assign(n, 0.0);
    out.valid_mask.assign(n, true);

    const auto dpsi = spectral_derivative(psi.values, psi.grid);
    double rho_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) rho_max = std::max(rho_max, std::norm(psi.values[j]));
    const double cutoff = node_threshold * node_threshold * rho_max;

    for (std::size_t j = 0; j < n; ++j) {
        const double rho = std::norm(psi.values[j]);
        if (rho < cutoff || rho == 0.0) {
            out.valid_mask[j] = false;
            continue;
        }
        out.P_B[j] = params.hbar * std::imag(std::conj(psi.values[j]) * dpsi[j]) / rho;
    }
    return out;
}

QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalParams& params) {
    QuantumPotentialField out;
    out.grid = polar.grid;
    out.time = polar.time;
    const std::size_t n = polar.R.size();
    out.Q_pot.assign(n, 0.0);
    out.valid_mask.assign(n, true);

    const auto d2R = spectral_second_derivative_real(polar.R, polar.grid);
    const double coef = -params.hbar * params.hbar / (2.0 * params.mass);
    for (std::size_t j = 0; j < n; ++j) {
        if (polar.node_mask[j] || polar.R[j] <= 0.0) {
            out.valid_mask[j] = false;
            continue;
        }
        out.Q_pot[j] = coef * d2R[j] / polar.R[j];
    }
    return out;
}

ResidualField qhj_residual(const PolarField& polar_t0, const PolarField& polar_t1,
                           const Potential& pot, const PhysicalParams& params) {
    check_pair(polar_t0.grid, polar_t1.grid, polar_t0.time, polar_t1.time, "qhj_residual");
    const std::size_t n = polar_t0.R.size();
    const double dt = polar_t1.time - polar_t0.time;
    const double t_mid = 0.5 * (polar_t0.time + polar_t1.time);

    // align the two unwrapped phases by a global 2*pi*hbar shift
    const double two_pi_hbar = 2.0 * std::numbers::pi * params.hbar;
    double mean_diff = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (polar_t0.node_mask[j] || polar_t1.node_mask[j]) continue;
        mean_diff += polar_t1.S[j] - polar_t0.S[j];
        ++count;
    }
    if (count == 0) throw AllPointsMasked("qhj_residual: no common unmasked points");
    mean_diff /= static_cast<double>(count);
    const double shift = -two_pi_hbar * std::round(mean_diff / two_pi_hbar);

    // mid-time fields; R is defined everywhere, S only off the mask, so the
    // masked gaps of S alone are bridged linearly
    std::vector<double> S_mid(n, 0.0), R_mid(n, 0.0);
    std::vector<bool> valid(n, true);
    for (std::size_t j = 0; j < n; ++j) {
        valid[j] = !polar_t0.node_mask[j] && !polar_t1.node_mask[j];
        R_mid[j] = 0.5 * (polar_t0.R[j] + polar_t1.R[j]);
        if (valid[j]) S_mid[j] = 0.5 * (polar_t0.S[j] + polar_t1.S[j] + shift);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (valid[j]) continue;
        std::size_t lo = j, hi = j;
        while (lo > 0 && !valid[lo]) --lo;
        while (hi + 1 < n && !valid[hi]) ++hi;
        const bool has_lo = valid[lo], has_hi = valid[hi];
        if (has_lo && has_hi && hi > lo) {
            const double t = static_cast<double>(j - lo) / static_cast<double>(hi - lo);
            S_mid[j] = (1.0 - t) * S_mid[lo] + t * S_mid[hi];
        } else if (has_lo) {
            S_mid[j] = S_mid[lo];
        } else if (has_hi) {
            S_mid[j] = S_mid[hi];
        }
    }

    // S is not grid-periodic (it carries a net ramp); use local differences.
    // R decays at the boundary, so the spectral second derivative applies.
    const auto dS = fd4_derivative_real(S_mid, polar_t0.grid);
    const auto d2R = spectral_second_derivative_real(R_mid, polar_t0.grid);

    // the S stencil must not read bridged values: erode the valid set by the
    // half-width of the difference stencil
    std::vector<bool> interior = valid;
    for (std::size_t j = 0; j < n; ++j) {
        if (valid[j]) continue;
        const std::size_t lo = j >= 2 ? j - 2 : 0;
        const std::size_t hi = std::min(n - 1, j + 2);
        for (std::size_t l = lo; l <= hi; ++l) interior[l] = false;
    }
    interior[0] = interior[1] = false;
    interior[n - 1] = interior[n - 2] = false;

    ResidualField res;
    res.grid = polar_t0.grid;
    res.time = t_mid;
    res.residual.assign(n, 0.0);
    res.valid_mask = interior;
    for (std::size_t j = 0; j < n; ++j) {
        if (!interior[j]) continue;
        const double dSdt = (polar_t1.S[j] + shift - polar_t0.S[j]) / dt;
        const double kinetic = dS[j] * dS[j] / (2.0 * params.mass);
        const double qpot = R_mid[j] > 0.0
                                ? -params.hbar * params.hbar * d2R[j] /
                                      (2.0 * params.mass * R_mid[j])
                                : 0.0;
        const double v = pot.value(res.grid.q(j), params);
        res.residual[j] = dSdt + kinetic + qpot + v;
    }
    (void)t_mid;
    finalize_norms(res);
    return res;
}

ResidualField continuity_residual(const WaveField& psi_t0, const WaveField& psi_t1,
                                  const PhysicalParams& params, double node_threshold) {
    check_pair(psi_t0.grid, psi_t1.grid, psi_t0.time, psi_t1.time, "continuity_residual");
    const std::size_t n = psi_t0.values.size();
    const double dt = psi_t1.time - psi_t0.time;

    std::vector<double> rho0(n), rho1(n), current(n);
    const auto d0 = spectral_derivative(psi_t0.values, psi_t0.grid);
    const auto d1 = spectral_derivative(psi_t1.values, psi_t1.grid);
    for (std::size_t j = 0; j < n; ++j) {
        rho0[j] = std::norm(psi_t0.values[j]);
        rho1[j] = std::norm(psi_t1.values[j]);
        // mid-time current rho * dS/dq = hbar Im(psi* dpsi)
        const double j0 = params.hbar * std::imag(std::conj(psi_t0.values[j]) * d0[j]);
        const double j1 = params.hbar * std::imag(std::conj(psi_t1.values[j]) * d1[j]);
        current[j] = 0.5 * (j0 + j1);
    }
    const auto dJ = spectral_derivative_real(current, psi_t0.grid);

    double rho_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) rho_max = std::max(rho_max, rho0[j]);
    const double cutoff = node_threshold * node_threshold * rho_max;

    ResidualField res;
    res.grid = psi_t0.grid;
    res.time = 0.5 * (psi_t0.time + psi_t1.time);
    res.residual.assign(n, 0.0);
    res.valid_mask.assign(n, true);
    for (std::size_t j = 0; j < n; ++j) {
        if (rho0[j] < cutoff || rho1[j] < cutoff) {
            res.valid_mask[j] = false;
            continue;
        }
        res.residual[j] = (rho1[j] - rho0[j]) / dt + dJ[j] / params.mass;
    }
    finalize_norms(res);
    return res;
}

FlowTable build_flow_table(const std::vector<WaveField>& states, const PhysicalParams& params,
                           double node_threshold, bool with_osmotic) {
    if (states.size() < 2) throw Error("build_flow_table: need at least two snapshots");
    FlowTable tab;
    tab.grid = states.front().grid;
    tab.t0 = states.front().time;
    tab.dt = states[1].time - states[0].time;
    const std::size_t n = tab.grid.n_points;

    tab.velocity.resize(states.size());
    tab.halo.resize(states.size());
    if (with_osmotic) tab.log_drho.resize(states.size());

    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto& psi = states[s];
        if (psi.grid != tab.grid)
            throw InconsistentGrids("build_flow_table: snapshots on different grids");
        const auto mom = local_momentum(psi, params, node_threshold);
        auto& v = tab.velocity[s];
        v.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = mom.valid_mask[j] ? mom.P_B[j] / params.mass : 0.0;

        if (with_osmotic) {
            const auto rho = psi.density_profile();
            const auto drho = spectral_derivative_real(rho, tab.grid);
            auto& u = tab.log_drho[s];
            u.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                u[j] = mom.valid_mask[j] && rho[j] > 0.0 ? drho[j] / (2.0 * rho[j]) : 0.0;
        }

        // node halo: mask dilated by two cells
        auto& h = tab.halo[s];
        h.assign(n, false);
        for (std::size_t j = 0; j < n; ++j) {
            if (mom.valid_mask[j]) continue;
            const std::size_t lo = j >= 2 ? j - 2 : 0;
            const std::size_t hi = std::min(n - 1, j + 2);
            for (std::size_t l = lo; l <= hi; ++l) h[l] = true;
        }
    }
    return tab;
}

namespace {

double flow_velocity(const FlowTable& tab, std::size_t s, double frac, double x) {
    const double va = cubic_interp(tab.velocity[s], tab.grid, x);
    if (frac <= 0.0 || s + 1 >= tab.velocity.size()) return va;
    const double vb = cubic_interp(tab.velocity[s + 1], tab.grid, x);
    return (1.0 - frac) * va + frac * vb;
}

bool in_halo(const FlowTable& tab, std::size_t s, double x) {
    const std::size_t j = tab.grid.nearest_index(x);
    if (tab.halo[s][j]) return true;
    return s + 1 < tab.halo.size() && tab.halo[s + 1][j];
}

// true when any halo cell lies in the closed index range swept by a step
bool sweeps_halo(const FlowTable& tab, std::size_t s, double x0, double x1) {
    std::size_t a = tab.grid.nearest_index(std::min(x0, x1));
    std::size_t b = tab.grid.nearest_index(std::max(x0, x1));
    const bool next = s + 1 < tab.halo.size();
    for (std::size_t j = a; j <= b; ++j) {
        if (tab.halo[s][j] || (next && tab.halo[s + 1][j])) return true;
    }
    return false;
}

}  // namespace

TrajectorySet integrate_trajectories(const std::vector<WaveField>& states,
                                     const std::vector<double>& seeds,
                                     const PhysicalParams& params, double node_threshold,
                                     std::size_t n_threads) {
    const FlowTable tab = build_flow_table(states, params, node_threshold, false);
    const SpatialGrid& grid = tab.grid;
    for (double s : seeds)
        if (!grid.contains(s))
            throw SeedOutOfRange("integrate_trajectories: seed " + std::to_string(s) +
                                 " outside the grid");

    const std::size_t n_times = states.size();
    const double dt = tab.dt;

    TrajectorySet out;
    out.times.resize(n_times);
    for (std::size_t s = 0; s < n_times; ++s) out.times[s] = states[s].time;
    out.seeds = seeds;
    out.positions.assign(seeds.size(), std::vector<double>(n_times, 0.0));
    out.frozen.assign(seeds.size(), false);

    parallel_chunks(seeds.size(), n_threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double x = seeds[i];
            bool frozen = false;
            out.positions[i][0] = x;
            for (std::size_t s = 0; s + 1 < n_times; ++s) {
                if (!frozen) {
                    if (in_halo(tab, s, x)) {
                        frozen = true;
                    } else {
                        const double k1 = flow_velocity(tab, s, 0.0, x);
                        const double k2 = flow_velocity(tab, s, 0.5, x + 0.5 * dt * k1);
                        const double k3 = flow_velocity(tab, s, 0.5, x + 0.5 * dt * k2);
                        const double k4 = flow_velocity(tab, s, 1.0, x + dt * k3);
                        const double x_new = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
                        if (sweeps_halo(tab, s, x, x_new)) {
                            frozen = true;
                        } else {
                            x = std::clamp(x_new, grid.q_min, grid.q_max);
                        }
                    }
                }
                out.positions[i][s + 1] = x;
            }
            out.frozen[i] = frozen;
        }
    });

    return out;
}

}  // namespace bohmlab
