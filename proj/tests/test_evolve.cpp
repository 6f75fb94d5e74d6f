#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bohmlab/evolve.hpp"
#include "bohmlab/states.hpp"
#include "oracles.hpp"

using namespace bohmlab;

TEST_CASE("free packet disperses per the closed form") {
    // sigma(t)^2 = s0^2 (1 + (hbar t / (2 m s0^2))^2); at t=1 with s0=1 this
    // is 1.25
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);

    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);

    const double w = position_spread(res.states.back());
    CHECK(w * w == doctest::Approx(1.25).epsilon(1e-6));

    const WaveField ref = oracles::free_gaussian(g, par, 0.0, 1.0, 0.0, 1.0);
    CHECK(l2_distance(res.states.back(), ref) < 1e-6);

    CHECK(res.norm_drift < 1e-8);
    CHECK(res.energy_drift < 1e-8);
}

TEST_CASE("free packet with momentum rides the Ehrenfest line") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, -3.0, 1.0, 3.0);

    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);
    for (std::size_t s = 0; s <= cfg.n_steps; s += 250) {
        const double t = cfg.dt * static_cast<double>(s);
        CHECK(expectation_q(res.states[s]) == doctest::Approx(-3.0 + 3.0 * t).epsilon(1e-8));
    }
}

TEST_CASE("coherent state center oscillates as 2 cos t") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = coherent_state(g, par, 1.0, 2.0, 0.0);
    const Potential pot = Potential::harmonic(1.0);

    EvolutionConfig cfg;
    cfg.dt = 2.5e-4;
    cfg.n_steps = 4000;  // t = 1
    const EvolutionResult res = evolve(psi0, pot, cfg, par);
    for (std::size_t s = 0; s <= cfg.n_steps; s += 1000) {
        const double t = cfg.dt * static_cast<double>(s);
        CHECK(expectation_q(res.states[s]) == doctest::Approx(2.0 * std::cos(t)).epsilon(1e-6));
    }
}

TEST_CASE("two-packet state evolves onto the analytic superposition") {
    // interference fringes included: the evolved state must match the
    // closed-form two-Gaussian evolution, and the minima spacing follows
    // 2 pi hbar t / (m sep)
    const SpatialGrid g = make_grid(-30.0, 30.0, 2048);
    const PhysicalParams par;
    const double sep = 8.0, t = 6.0;
    const WaveField psi0 = two_packet_superposition(g, par, sep, 1.0, 0.0, 0.0);

    EvolutionConfig cfg;
    cfg.dt = 2e-3;
    cfg.n_steps = 3000;
    const EvolutionResult res = evolve(psi0, Potential::free(), cfg, par);
    const WaveField ref = oracles::free_two_packet(g, par, sep, 1.0, 0.0, 0.0, t);
    CHECK(l2_distance(res.states.back(), ref) < 1e-6);

    const double expected = 2.0 * std::numbers::pi * par.hbar * t / (par.mass * sep);
    std::vector<double> minima;
    const auto& v = res.states.back().values;
    for (std::size_t j = 1; j + 1 < g.n_points; ++j) {
        if (std::abs(g.q(j)) > 1.5 * expected) continue;
        if (std::norm(v[j]) < std::norm(v[j - 1]) && std::norm(v[j]) < std::norm(v[j + 1]))
            minima.push_back(g.q(j));
    }
    REQUIRE(minima.size() >= 2);
    for (std::size_t i = 0; i + 1 < minima.size(); ++i)
        CHECK(minima[i + 1] - minima[i] == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("expectations: symmetric packet and boosted packet") {
    const SpatialGrid g = make_grid(-20.0, 20.0, 512);
    const PhysicalParams par;
    const WaveField sym = gaussian_packet(g, par, 0.0, 1.0, 0.0);
    CHECK(std::abs(expectation_q(sym)) < 1e-12);
    CHECK(std::abs(expectation_p(sym, par)) < 1e-12);

    const WaveField boosted = gaussian_packet(g, par, 0.0, 1.0, 2.0);
    CHECK(expectation_p(boosted, par) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("coherent state energy matches hbar w (1/2 + |alpha|^2)") {
    // displacement a gives |alpha|^2 = m w a^2 / (2 hbar)
    const SpatialGrid g = make_grid(-20.0, 20.0, 1024);
    const PhysicalParams par;
    const double a = 2.0, w = 1.0;
    const WaveField psi0 = coherent_state(g, par, w, a, 0.0);
    const Potential pot = Potential::harmonic(w);

    const double expected = par.hbar * w * (0.5 + par.mass * w * a * a / (2.0 * par.hbar));
    CHECK(energy(psi0, pot, par) == doctest::Approx(expected).epsilon(1e-10));

    EvolutionConfig cfg;
    cfg.dt = 2e-4;
    cfg.n_steps = 2500;  // half a period
    const EvolutionResult res = evolve(psi0, pot, cfg, par);
    CHECK(res.energy_drift < 1e-8);
    CHECK(res.norm_drift < 1e-8);
}

TEST_CASE("second-order convergence in dt") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 512);
    const PhysicalParams par;
    const WaveField psi0 = coherent_state(g, par, 1.0, 2.0, 0.0);
    const Potential pot = Potential::harmonic(1.0);
    const double t_final = 0.4;

    auto run = [&](double dt) {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
        return evolve(psi0, pot, cfg, par).states.back();
    };
    const WaveField ref = run(1e-3 / 8.0);
    const double e1 = l2_distance(run(1e-3), ref);
    const double e2 = l2_distance(run(5e-4), ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("Crank-Nicolson with hard walls stays unitary and matches split-operator") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 1024);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 1.0);
    const Potential pot = Potential::harmonic(1.0);

    EvolutionConfig cn;
    cn.dt = 1e-3;
    cn.n_steps = 500;
    cn.method = EvolutionMethod::CrankNicolson;
    cn.boundary = BoundaryKind::HardWall;
    const EvolutionResult res_cn = evolve(psi0, pot, cn, par);
    CHECK(res_cn.norm_drift < 1e-8);

    EvolutionConfig so;
    so.dt = 1e-3;
    so.n_steps = 500;
    const EvolutionResult res_so = evolve(psi0, pot, so, par);
    // the schemes differ at the spatial-discretization level; dq^2 accuracy
    CHECK(l2_distance(res_cn.states.back(), res_so.states.back()) < 5e-3);
}

TEST_CASE("evolve validates method/boundary pairing and flags instability") {
    const SpatialGrid g = make_grid(-16.0, 16.0, 256);
    const PhysicalParams par;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);

    EvolutionConfig bad;
    bad.method = EvolutionMethod::SplitOperator;
    bad.boundary = BoundaryKind::HardWall;
    CHECK_THROWS_AS(evolve(psi0, Potential::free(), bad, par), Error);

    // the stability guard warns but does not abort
    EvolutionConfig warn_cfg;
    warn_cfg.dt = 0.2;
    warn_cfg.n_steps = 1;
    const Potential tall = Potential::barrier(50.0, 4.0, 10.0);
    const EvolutionResult res = evolve(psi0, tall, warn_cfg, par);
    CHECK(!res.warnings.empty());
}
