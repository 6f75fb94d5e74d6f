#include "bohmlab/picture.hpp"

#include <cmath>
#include <string>

namespace bohmlab {

std::vector<double> ActionPhase::gradient() const {
    if (analytic_slope) return slope;
    return fd4_derivative_real(S_c, grid);
}

ActionPhase action_phase_from_state(const PolarField& polar) {
    ActionPhase ph;
    ph.grid = polar.grid;
    ph.time = polar.time;
    ph.source = PhaseSource::FromState;
    ph.S_c = bridged_action(polar);
    return ph;
}

ActionPhase action_phase_linear(const SpatialGrid& grid, double c, double constant) {
    ActionPhase ph;
    ph.grid = grid;
    ph.source = PhaseSource::Classical;
    ph.S_c.resize(grid.n_points);
    ph.slope.assign(grid.n_points, c);
    ph.analytic_slope = true;
    for (std::size_t j = 0; j < grid.n_points; ++j) ph.S_c[j] = c * grid.q(j) + constant;
    return ph;
}

ActionPhase action_phase_quadratic(const SpatialGrid& grid, double curvature, double slope) {
    ActionPhase ph;
    ph.grid = grid;
    ph.source = PhaseSource::Classical;
    ph.S_c.resize(grid.n_points);
    ph.slope.resize(grid.n_points);
    ph.analytic_slope = true;
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double q = grid.q(j);
        ph.S_c[j] = 0.5 * curvature * q * q + slope * q;
        ph.slope[j] = curvature * q + slope;
    }
    return ph;
}

WaveField apply_V(const WaveField& psi, const ActionPhase& phase, VDirection direction,
                  const PhysicalParams& params) {
    if (psi.grid != phase.grid) throw GridMismatch("apply_V: state and phase grids differ");
    WaveField out = psi;
    const double sign = direction == VDirection::Forward ? 1.0 : -1.0;
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] *= std::exp(cplx(0.0, sign * phase.S_c[j] / params.hbar));
    return out;
}

WaveField momentum_apply(const WaveField& psi, const PhysicalParams& params) {
    WaveField out = psi;
    const auto d = spectral_derivative(psi.values, psi.grid);
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = cplx(0.0, -params.hbar) * d[j];
    return out;
}

WaveField transformed_momentum(const WaveField& psi, const ActionPhase& phase,
                               const PhysicalParams& params) {
    if (psi.grid != phase.grid)
        throw GridMismatch("transformed_momentum: state and phase grids differ");
    WaveField out = momentum_apply(psi, params);
    const auto dS = phase.gradient();
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] += dS[j] * psi.values[j];
    return out;
}

cplx inner_product(const WaveField& a, const WaveField& b) {
    if (a.grid != b.grid) throw GridMismatch("inner_product: grids differ");
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) s += std::conj(a.values[j]) * b.values[j];
    return s * a.grid.dq;
}

std::pair<ResidualField, ResidualField> split_real_imaginary(
    const std::vector<WaveField>& psi_seq, const Potential& pot, const PhysicalParams& params,
    double node_threshold) {
    if (psi_seq.size() < 2)
        throw Error("split_real_imaginary: need at least two snapshots");
    const std::size_t mid = (psi_seq.size() - 1) / 2;
    const WaveField& a = psi_seq[mid];
    const WaveField& b = psi_seq[mid + 1];
    const auto pa = polar_decompose(a, params, node_threshold);
    const auto pb = polar_decompose(b, params, node_threshold);
    return {qhj_residual(pa, pb, pot, params),
            continuity_residual(a, b, params, node_threshold)};
}

namespace {

// RK4 for the Hamiltonian flow with Lagrangian accumulation via Simpson.
ClassicalEndpointData integrate_flow(const Potential& pot, double q, double p, double t,
                                     const PhysicalParams& params, std::size_t n_steps) {
    const double m = params.mass;
    const double h = t / static_cast<double>(n_steps);
    auto lagr = [&](double qq, double pp) {
        return pp * pp / (2.0 * m) - pot.value(qq, params);
    };
    auto accel = [&](double qq) { return -pot.derivative(qq, params); };

    double qq = q, pp = p, action = 0.0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double L0 = lagr(qq, pp);

        const double k1q = pp / m, k1p = accel(qq);
        const double k2q = (pp + 0.5 * h * k1p) / m, k2p = accel(qq + 0.5 * h * k1q);
        const double k3q = (pp + 0.5 * h * k2p) / m, k3p = accel(qq + 0.5 * h * k2q);
        const double k4q = (pp + h * k3p) / m, k4p = accel(qq + h * k3q);

        const double q_mid = qq + 0.5 * h * k2q;  // midpoint estimate from stage 2
        const double p_mid = pp + 0.5 * h * k2p;

        qq += h * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0;
        pp += h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;

        if (!std::isfinite(qq) || !std::isfinite(pp))
            throw SolverDiverged("classical_endpoints: trajectory diverged");

        action += h * (L0 + 4.0 * lagr(q_mid, p_mid) + lagr(qq, pp)) / 6.0;
    }
    return {q, p, qq, pp, action};
}

}  // namespace

ClassicalEndpointData classical_endpoints(const Potential& pot, double q, double p, double t,
                                          const PhysicalParams& params) {
    if (!(t > 0.0)) throw Error("classical_endpoints: t must be positive");
    const double m = params.mass;
    switch (pot.kind()) {
        case PotentialKind::Free: {
            const double qf = q + p * t / m;
            // action = (p' q' - p q)/2 for quadratic Lagrangians
            return {q, p, qf, p, 0.5 * (p * qf - p * q)};
        }
        case PotentialKind::Harmonic: {
            const double w = pot.omega();
            const double c = std::cos(w * t), s = std::sin(w * t);
            const double qf = q * c + p / (m * w) * s;
            const double pf = p * c - m * w * q * s;
            return {q, p, qf, pf, 0.5 * (pf * qf - p * q)};
        }
        default:
            return integrate_flow(pot, q, p, t, params,
                                  std::max<std::size_t>(1000, static_cast<std::size_t>(t / 1e-4)));
    }
}

std::vector<double> newtonian_trajectory(const Potential& pot, const PhysicalParams& params,
                                         double q0, double p0, double t, std::size_t n_steps) {
    const double m = params.mass;
    const double h = t / static_cast<double>(n_steps);
    auto accel = [&](double qq) { return -pot.derivative(qq, params); };

    std::vector<double> path;
    path.reserve(n_steps + 1);
    double qq = q0, pp = p0;
    path.push_back(qq);
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double k1q = pp / m, k1p = accel(qq);
        const double k2q = (pp + 0.5 * h * k1p) / m, k2p = accel(qq + 0.5 * h * k1q);
        const double k3q = (pp + 0.5 * h * k2p) / m, k3p = accel(qq + 0.5 * h * k2q);
        const double k4q = (pp + h * k3p) / m, k4p = accel(qq + h * k3q);
        qq += h * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0;
        pp += h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
        if (!std::isfinite(qq) || !std::isfinite(pp))
            throw SolverDiverged("newtonian_trajectory: diverged");
        path.push_back(qq);
    }
    return path;
}

double two_point_action(const Potential& pot, double q, double q_final, double t,
                        const PhysicalParams& params) {
    // shoot over the initial momentum with a secant iteration
    const double m = params.mass;
    double p0 = m * (q_final - q) / t;
    double p1 = p0 + 0.1 * (std::abs(p0) + 1.0);
    double f0 = classical_endpoints(pot, q, p0, t, params).q_final - q_final;
    double f1 = classical_endpoints(pot, q, p1, t, params).q_final - q_final;
    for (int it = 0; it < 100; ++it) {
        if (std::abs(f1) < 1e-12) break;
        const double denom = f1 - f0;
        if (denom == 0.0) throw SolverDiverged("two_point_action: degenerate secant step");
        const double p2 = p1 - f1 * (p1 - p0) / denom;
        p0 = p1;
        f0 = f1;
        p1 = p2;
        f1 = classical_endpoints(pot, q, p1, t, params).q_final - q_final;
        if (!std::isfinite(p1)) throw SolverDiverged("two_point_action: shooting diverged");
    }
    if (std::abs(f1) > 1e-8)
        throw SolverDiverged("two_point_action: shooting residual " + std::to_string(f1));
    return classical_endpoints(pot, q, p1, t, params).action;
}

PictureCheckReport picture_check(const WaveField& psi, const ActionPhase& phase,
                                 const PhysicalParams& params) {
    PictureCheckReport rep;
    const WaveField psi_d = apply_V(psi, phase, VDirection::Adjoint, params);
    rep.norm_deviation = std::abs(psi_d.norm() - psi.norm());

    const WaveField roundtrip = apply_V(psi_d, phase, VDirection::Forward, params);
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        rep.roundtrip_deviation =
            std::max(rep.roundtrip_deviation, std::abs(roundtrip.values[j] - psi.values[j]));

    auto apply_q = [&](const WaveField& f) {
        WaveField out = f;
        for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] *= f.grid.q(j);
        return out;
    };

    // q_D = q, p_D = p + dS/dq; squares by double application
    const WaveField q_psi = apply_q(psi);
    const WaveField q_psi_d = apply_q(psi_d);
    rep.err_q = std::abs(inner_product(psi_d, q_psi_d) - inner_product(psi, q_psi));

    const WaveField p_psi = momentum_apply(psi, params);
    const WaveField pd_psi_d = transformed_momentum(psi_d, phase, params);
    rep.err_p = std::abs(inner_product(psi_d, pd_psi_d) - inner_product(psi, p_psi));

    rep.err_q2 = std::abs(inner_product(psi_d, apply_q(q_psi_d)) -
                          inner_product(psi, apply_q(q_psi)));

    const WaveField p2_psi = momentum_apply(p_psi, params);
    const WaveField pd2_psi_d = transformed_momentum(pd_psi_d, phase, params);
    rep.err_p2 = std::abs(inner_product(psi_d, pd2_psi_d) - inner_product(psi, p2_psi));

    return rep;
}

}  // namespace bohmlab
