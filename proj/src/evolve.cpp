#include "bohmlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bohmlab {

namespace {

// One Crank-Nicolson step with Dirichlet walls:
//   (1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi
// H uses the standard three-point Laplacian.
void crank_nicolson_step(std::vector<cplx>& psi, const std::vector<double>& V,
                         const SpatialGrid& grid, const PhysicalParams& params, double dt) {
    const std::size_t n = psi.size();
    const double hbar = params.hbar;
    const double kin = hbar * hbar / (2.0 * params.mass * grid.dq * grid.dq);
    const cplx lam = cplx(0.0, dt / (2.0 * hbar));

    // tridiagonal A = 1 + lam*H, rhs = (1 - lam*H) psi
    std::vector<cplx> diag(n), rhs(n);
    const cplx off = -lam * kin;
    for (std::size_t j = 0; j < n; ++j) {
        const double hjj = 2.0 * kin + V[j];
        diag[j] = 1.0 + lam * hjj;
        cplx h_psi = hjj * psi[j];
        if (j > 0) h_psi -= kin * psi[j - 1];
        if (j + 1 < n) h_psi -= kin * psi[j + 1];
        rhs[j] = psi[j] - lam * h_psi;
    }

    // Thomas solve
    std::vector<cplx> cp(n);
    cp[0] = off / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t j = 1; j < n; ++j) {
        const cplx denom = diag[j] - off * cp[j - 1];
        cp[j] = off / denom;
        rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom;
    }
    psi[n - 1] = rhs[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) psi[j] = rhs[j] - cp[j] * psi[j + 1];

    // hard walls
    psi.front() = 0.0;
    psi.back() = 0.0;
}

}  // namespace

EvolutionResult evolve(const WaveField& psi0, const Potential& pot,
                       const EvolutionConfig& cfg, const PhysicalParams& params) {
    if (!(cfg.dt > 0.0)) throw Error("evolve: dt must be positive");
    if (cfg.method == EvolutionMethod::SplitOperator && cfg.boundary != BoundaryKind::Periodic)
        throw Error("evolve: SplitOperator requires periodic boundaries");
    if (cfg.method == EvolutionMethod::CrankNicolson && cfg.boundary != BoundaryKind::HardWall)
        throw Error("evolve: CrankNicolson requires hard-wall boundaries");

    EvolutionResult res;
    const SpatialGrid& grid = psi0.grid;
    const std::size_t n = grid.n_points;
    const std::vector<double> V = pot.tabulate(grid, params);

    const double vmax = pot.max_abs(grid, params);
    if (cfg.dt * vmax / params.hbar >= 0.5)
        res.warnings.push_back("stability guard: dt*max|V|/hbar = " +
                               std::to_string(cfg.dt * vmax / params.hbar) + " >= 0.5");

    // phase factors for the split-operator stages
    std::vector<cplx> half_v(n), kin_full(n);
    if (cfg.method == EvolutionMethod::SplitOperator) {
        const auto k = wavenumbers(grid);
        for (std::size_t j = 0; j < n; ++j) {
            half_v[j] = std::exp(cplx(0.0, -0.5 * V[j] * cfg.dt / params.hbar));
            const double p = params.hbar * k[j];
            kin_full[j] = std::exp(cplx(0.0, -p * p * cfg.dt / (2.0 * params.mass * params.hbar)));
        }
    }

    res.states.reserve(cfg.n_steps + 1);
    res.states.push_back(psi0);

    const double e0 = energy(psi0, pot, params);
    std::vector<cplx> cur = psi0.values;
    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
        if (cfg.method == EvolutionMethod::SplitOperator) {
            for (std::size_t j = 0; j < n; ++j) cur[j] *= half_v[j];
            fft(cur);
            for (std::size_t j = 0; j < n; ++j) cur[j] *= kin_full[j];
            ifft(cur);
            for (std::size_t j = 0; j < n; ++j) cur[j] *= half_v[j];
        } else {
            crank_nicolson_step(cur, V, grid, params, cfg.dt);
        }
        WaveField snap;
        snap.grid = grid;
        snap.time = psi0.time + static_cast<double>(step + 1) * cfg.dt;
        snap.values = cur;
        const double drift = std::abs(snap.norm() - 1.0);
        res.norm_drift = std::max(res.norm_drift, drift);
        if (!(drift <= 1e-4))  // also trips on NaN
            throw UnstableStep("evolve: norm drift " + std::to_string(drift) + " at step " +
                               std::to_string(step + 1));
        res.states.push_back(std::move(snap));
    }

    for (const auto& s : res.states)
        res.energy_drift = std::max(res.energy_drift, std::abs(energy(s, pot, params) - e0));

    // post-hoc boundary-proximity check: packet center should stay at least
    // five spreads away from either wall
    for (const auto& s : res.states) {
        const double qc = expectation_q(s);
        const double w = position_spread(s);
        if (qc - 5.0 * w < grid.q_min || qc + 5.0 * w > grid.q_max) {
            res.warnings.push_back("packet within 5 spreads of the boundary at t = " +
                                   std::to_string(s.time));
            break;
        }
    }

    return res;
}

double expectation_q(const WaveField& psi) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        s += psi.grid.q(j) * std::norm(psi.values[j]);
    return s * psi.grid.dq;
}

double position_spread(const WaveField& psi) {
    const double qbar = expectation_q(psi);
    double s = 0.0;
    for (std::size_t j = 0; j < psi.values.size(); ++j) {
        const double d = psi.grid.q(j) - qbar;
        s += d * d * std::norm(psi.values[j]);
    }
    return std::sqrt(s * psi.grid.dq);
}

double expectation_p(const WaveField& psi, const PhysicalParams& params) {
    const auto dpsi = spectral_derivative(psi.values, psi.grid);
    double s = 0.0;
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        s += std::imag(std::conj(psi.values[j]) * dpsi[j]);
    return params.hbar * s * psi.grid.dq;
}

double energy(const WaveField& psi, const Potential& pot, const PhysicalParams& params) {
    // kinetic part via Parseval on the spectral derivative
    std::vector<cplx> hat = psi.values;
    fft(hat);
    const auto k = wavenumbers(psi.grid);
    const std::size_t n = psi.values.size();
    double kin = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = params.hbar * k[j];
        kin += p * p * std::norm(hat[j]);
    }
    kin *= psi.grid.dq / (2.0 * params.mass * static_cast<double>(n));

    double potE = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        potE += pot.value(psi.grid.q(j), params) * std::norm(psi.values[j]);
    potE *= psi.grid.dq;

    return kin + potE;
}

}  // namespace bohmlab
