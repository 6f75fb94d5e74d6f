#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "bohmlab/bohm.hpp"
#include "bohmlab/ensemble.hpp"
#include "bohmlab/evolve.hpp"
#include "bohmlab/states.hpp"
#include "oracles.hpp"

using namespace bohmlab;

TEST_CASE("local momentum: plane phase, real field, polar cross-check") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;

    const WaveField boosted = gaussian_packet(g, par, 0.0, 1.0, 2.0);
    const MomentumField mom = local_momentum(boosted, par);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (!mom.valid_mask[j]) continue;
        CHECK(mom.P_B[j] == doctest::Approx(2.0).epsilon(1e-9));
    }

    // the ratio Im(psi* psi')/rho amplifies rounding noise where rho is tiny;
    // assert where the density is meaningful
    const WaveField real_psi = gaussian_packet(g, par, 0.0, 1.0, 0.0);
    const MomentumField zero = local_momentum(real_psi, par);
    double rho_max0 = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
        rho_max0 = std::max(rho_max0, std::norm(real_psi.values[j]));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (!zero.valid_mask[j]) continue;
        if (std::norm(real_psi.values[j]) < 1e-6 * rho_max0) continue;
        CHECK(std::abs(zero.P_B[j]) < 1e-9);
    }

    // cross-check against the gradient of the unwrapped action on a state
    // with genuinely varying phase
    const WaveField psi0 = gaussian_packet(g, par, -2.0, 1.0, 1.5);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 700;
    const WaveField psi = evolve(psi0, Potential::free(), cfg, par).states.back();
    const MomentumField route_a = local_momentum(psi, par);
    const PolarField polar = polar_decompose(psi, par);
    const auto dS = action_gradient(polar);
    double rho_max = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
        rho_max = std::max(rho_max, std::norm(psi.values[j]));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        // compare well inside the packet; the unwrapped-phase route loses
        // meaning in the exponential tails
        if (std::norm(psi.values[j]) < 1e-6 * rho_max) continue;
        CHECK(route_a.P_B[j] ==
              doctest::Approx(dS[j]).epsilon(1e-6).scale(std::abs(route_a.P_B[j]) + 1.0));
    }
}

TEST_CASE("quantum potential: harmonic ground state gives constant Q + V") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 1024);
    const PhysicalParams par;
    const double w = 1.0;
    const WaveField psi = harmonic_ground_state(g, par, w);
    const Potential pot = Potential::harmonic(w);

    const QuantumPotentialField qf = quantum_potential(polar_decompose(psi, par), par);
    double rho_max = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
        rho_max = std::max(rho_max, std::norm(psi.values[j]));
    const double expected = 0.5 * par.hbar * w;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (!qf.valid_mask[j]) continue;
        if (std::norm(psi.values[j]) < 1e-8 * rho_max) continue;
        CHECK(qf.Q_pot[j] + pot.value(g.q(j), par) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("quantum potential: Gaussian closed form, independent of boost") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField plain = gaussian_packet(g, par, 0.0, 1.0, 0.0);
    const WaveField boosted = gaussian_packet(g, par, 0.0, 1.0, 3.0);

    const QuantumPotentialField qa = quantum_potential(polar_decompose(plain, par), par);
    const QuantumPotentialField qb = quantum_potential(polar_decompose(boosted, par), par);

    double rho_max = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
        rho_max = std::max(rho_max, std::norm(plain.values[j]));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (!qa.valid_mask[j] || !qb.valid_mask[j]) continue;
        if (std::norm(plain.values[j]) < 1e-6 * rho_max) continue;
        const double ref = oracles::gaussian_quantum_potential(par, 0.0, 1.0, g.q(j));
        CHECK(qa.Q_pot[j] == doctest::Approx(ref).epsilon(1e-6));
        CHECK(qb.Q_pot[j] == doctest::Approx(qa.Q_pot[j]).epsilon(1e-9));
    }
}

TEST_CASE("residuals on the analytic coherent state") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const double w = 1.0, a = 2.0, dt = 1e-3, t = 0.7;
    const Potential pot = Potential::harmonic(w);

    const WaveField s0 = coherent_state(g, par, w, a, t);
    const WaveField s1 = coherent_state(g, par, w, a, t + dt);

    // amplitude-derivative diagnostics divide by R; at double precision the
    // quotient is meaningful down to about 1e-3 of the peak amplitude
    const double thr = 1e-3;
    const ResidualField qhj =
        qhj_residual(polar_decompose(s0, par, thr), polar_decompose(s1, par, thr), pot, par);
    CHECK(qhj.l2 < 1e-4);

    const ResidualField cont = continuity_residual(s0, s1, par, thr);
    CHECK(cont.l2 < 1e-4);
}

TEST_CASE("residual convergence: halving dq and dt shrinks both by ~4") {
    const PhysicalParams par;
    const double w = 1.0, a = 2.0, t = 0.7;
    const Potential pot = Potential::harmonic(w);

    auto run = [&](std::size_t n, double dt) {
        const SpatialGrid g = make_grid(-20.0, 20.0, n);
        const WaveField s0 = coherent_state(g, par, w, a, t);
        const WaveField s1 = coherent_state(g, par, w, a, t + dt);
        const double thr = 1e-3;
        const double qhj =
            qhj_residual(polar_decompose(s0, par, thr), polar_decompose(s1, par, thr), pot, par)
                .l2;
        const double cont = continuity_residual(s0, s1, par, thr).l2;
        return std::pair<double, double>{qhj, cont};
    };
    const auto coarse = run(1024, 1e-3);
    const auto fine = run(2048, 5e-4);
    const double r_qhj = coarse.first / fine.first;
    const double r_cont = coarse.second / fine.second;
    CHECK(r_qhj > 3.5);
    CHECK(r_qhj < 4.5);
    CHECK(r_cont > 3.5);
    CHECK(r_cont < 4.5);
}

TEST_CASE("stationary state: dS/dt = -E and static density") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 1024);
    const PhysicalParams par;
    const double w = 1.0, dt = 1e-3;
    const Potential pot = Potential::harmonic(w);

    const WaveField s0 = harmonic_ground_state(g, par, w);
    WaveField s1 = s0;
    s1.time = dt;
    // stationary evolution is a global phase e^{-iEt/hbar}
    const double E = 0.5 * par.hbar * w;
    for (auto& z : s1.values) z *= std::exp(cplx(0.0, -E * dt / par.hbar));

    const PolarField p0 = polar_decompose(s0, par, 1e-3);
    const PolarField p1 = polar_decompose(s1, par, 1e-3);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (p0.node_mask[j] || p1.node_mask[j]) continue;
        CHECK((p1.S[j] - p0.S[j]) / dt == doctest::Approx(-E).epsilon(1e-9));
    }
    CHECK(qhj_residual(p0, p1, pot, par).l2 < 1e-6);
    CHECK(continuity_residual(s0, s1, par, 1e-3).l2 < 1e-8);
}

TEST_CASE("trajectories: free packet center rides the Ehrenfest line") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 3.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);

    const TrajectorySet traj = integrate_trajectories(res.states, {0.0}, par);
    REQUIRE(traj.n_traj() == 1);
    CHECK(!traj.frozen[0]);
    for (std::size_t s = 0; s < traj.times.size(); s += 200) {
        const double t = traj.times[s];
        CHECK(traj.positions[0][s] == doctest::Approx(3.0 * t).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("trajectories: coherent state translates rigidly") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 1024);
    const PhysicalParams par;
    const double w = 1.0, a = 2.0;
    const WaveField psi0 = coherent_state(g, par, w, a, 0.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1500;
    const EvolutionResult res = evolve(psi0, Potential::harmonic(w), cfg, par);

    const std::vector<double> seeds = {1.0, 1.5, 2.0, 2.5, 3.0};
    const TrajectorySet traj = integrate_trajectories(res.states, seeds, par);

    // q_i(t) = q_i(0) + a (cos wt - 1): the velocity field is uniform in q,
    // so pairwise separations stay constant
    for (std::size_t s = 0; s < traj.times.size(); s += 300) {
        const double t = traj.times[s];
        const double shift = a * (std::cos(w * t) - 1.0);
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            CHECK(traj.positions[i][s] ==
                  doctest::Approx(seeds[i] + shift).epsilon(1e-5).scale(1.0));
        }
        for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
            const double sep = traj.positions[i + 1][s] - traj.positions[i][s];
            CHECK(sep == doctest::Approx(seeds[i + 1] - seeds[i]).epsilon(1e-5));
        }
    }
}

TEST_CASE("trajectories: no crossings through the two-packet collision") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = two_packet_superposition(g, par, 10.0, 1.0, 2.0, -2.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 2500;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);

    std::vector<double> seeds;
    for (int i = 0; i < 100; ++i)
        seeds.push_back(-8.0 + 16.0 * static_cast<double>(i) / 99.0);
    const TrajectorySet traj = integrate_trajectories(res.states, seeds, par);

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
            CHECK(traj.positions[i + 1][s] - traj.positions[i][s] >= -1e-12);
        }
    }
}

TEST_CASE("residuals reject mismatched or unordered snapshots") {
    const PhysicalParams par;
    const SpatialGrid a = make_grid(-16.0, 16.0, 256);
    const SpatialGrid b = make_grid(-20.0, 20.0, 256);
    const WaveField pa = gaussian_packet(a, par, 0.0, 1.0, 0.0);
    const WaveField pb = gaussian_packet(b, par, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(continuity_residual(pa, pb, par), InconsistentGrids);

    WaveField same_time = pa;
    CHECK_THROWS_AS(continuity_residual(pa, same_time, par), InconsistentGrids);

    CHECK_THROWS_AS(
        qhj_residual(polar_decompose(pa, par), polar_decompose(pb, par), Potential::free(), par),
        InconsistentGrids);
}

TEST_CASE("trajectory seeds outside the grid are rejected") {
    const SpatialGrid g = make_grid(-10.0, 10.0, 256);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 2;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);
    CHECK_THROWS_AS(integrate_trajectories(res.states, {12.0}, par), SeedOutOfRange);
}

TEST_CASE("equivariance: quantile-seeded trajectories track the density") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, -2.0, 1.0, 1.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);

    const std::size_t n_traj = 2000;
    const DensitySampler sampler(g, psi0.density_profile());
    std::vector<double> seeds(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i)
        seeds[i] = sampler.sample((static_cast<double>(i) + 0.5) / static_cast<double>(n_traj));

    const TrajectorySet traj = integrate_trajectories(res.states, seeds, par);

    std::vector<double> finals(n_traj);
    for (std::size_t i = 0; i < n_traj; ++i) finals[i] = traj.positions[i].back();
    const double l1 =
        histogram_l1_distance(finals, g, res.states.back().density_profile(), 8.0 * g.dq);
    CHECK(l1 < 0.05);
}
