#include "doctest.h"

#include <cmath>
#include <random>

#include "bohmlab/propagator.hpp"
#include "bohmlab/states.hpp"
#include "oracles.hpp"

using namespace bohmlab;

TEST_CASE("short-time action values") {
    const PhysicalParams par;
    CHECK(short_time_action(0.0, 1.0, 0.5, Potential::free(), par) ==
          doctest::Approx(1.0).epsilon(1e-15));

    // zero displacement leaves only the potential term
    const Potential barrier = Potential::barrier(2.0, 1.0, 0.0);
    CHECK(short_time_action(0.0, 0.0, 0.25, barrier, par) ==
          doctest::Approx(-0.5).epsilon(1e-15));

    // harmonic w=1: 0.5*(0.1)^2/0.01 - 0.01*(0.05)^2/2
    CHECK(short_time_action(0.0, 0.1, 0.01, Potential::harmonic(1.0), par) ==
          doctest::Approx(0.4999875).epsilon(1e-12));
}

TEST_CASE("momentum TAs: free values and finite-difference agreement") {
    const PhysicalParams par;
    const MomentumTAs free_ta = momentum_TAs(0.0, 1.0, 0.5, Potential::free(), par);
    CHECK(free_ta.p_initial == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(free_ta.p_final == doctest::Approx(2.0).epsilon(1e-15));

    const MomentumTAs still = momentum_TAs(0.7, 0.7, 0.5, Potential::free(), par);
    CHECK(still.p_initial == 0.0);
    CHECK(still.p_final == 0.0);

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    std::uniform_real_distribution<double> eps_dist(0.01, 0.8);
    for (const Potential& pot : {Potential::free(), Potential::harmonic(1.3)}) {
        for (int trial = 0; trial < 200; ++trial) {
            const double q = pos(gen), qf = pos(gen), eps = eps_dist(gen);
            const MomentumTAs ta = momentum_TAs(q, qf, eps, pot, par);
            const double fd_q = oracles::central_diff(
                [&](double x) { return short_time_action(x, qf, eps, pot, par); }, q, 1e-6);
            const double fd_qf = oracles::central_diff(
                [&](double x) { return short_time_action(q, x, eps, pot, par); }, qf, 1e-6);
            CHECK(ta.p_initial == doctest::Approx(-fd_q).epsilon(1e-8).scale(1.0));
            CHECK(ta.p_final == doctest::Approx(fd_qf).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("midpoint momentum: one-sided slopes and their combinations") {
    const PhysicalParams par;
    const MidpointSample s = midpoint_momentum(0.0, 1.0, 0.5, par);
    CHECK(s.Q == doctest::Approx(0.5));
    CHECK(s.p_backward == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.p_forward == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.current_momentum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.slope_difference() == doctest::Approx(0.0).scale(1.0));

    const MidpointSample zero = midpoint_momentum(0.3, 0.3, 0.1, par);
    CHECK(zero.p_backward == 0.0);
    CHECK(zero.p_forward == 0.0);
    CHECK(zero.current_momentum() == 0.0);

    // free relation p_eps = 2 * current on random samples
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> pos(-4.0, 4.0);
    std::uniform_real_distribution<double> eps_dist(0.01, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double q = pos(gen), qf = pos(gen), eps = eps_dist(gen);
        const MidpointSample ms = midpoint_momentum(q, qf, eps, par);
        const MomentumTAs ta = momentum_TAs(q, qf, eps, Potential::free(), par);
        CHECK(ta.p_initial ==
              doctest::Approx(2.0 * ms.current_momentum()).epsilon(1e-12).scale(1.0));
        CHECK(ms.slope_sum() == doctest::Approx(ta.p_initial).epsilon(1e-12).scale(1.0));
        CHECK(ms.p_backward == doctest::Approx(ms.p_forward).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("kernel guard: unresolvable slice is rejected, coarse slice warned") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-10.0, 10.0, 64);  // dq = 0.3125
    CHECK_THROWS_AS(build_kernel(g, 0.02, Potential::free(), par), UnresolvableKernel);

    const KernelMatrix warned = build_kernel(g, 0.05, Potential::free(), par);
    CHECK(!warned.warnings().empty());
}

TEST_CASE("free kernel application matches the dispersing Gaussian") {
    // alias displacement 2 pi eps / dq = 16.1 clears the half-domain plus the
    // packet support, so the quadrature is faithful
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-8.0, 8.0, 4096);
    const double eps = 0.01;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);

    const KernelMatrix K = build_kernel(g, eps, Potential::free(), par);
    CHECK(K.alias_displacement(par) > 0.5 * g.length() + 7.0);

    const WaveField out = K.apply(psi0);
    const WaveField ref = oracles::free_gaussian(g, par, 0.0, 1.0, 0.0, eps);
    CHECK(l2_distance(out, ref) < 1e-6);
}

TEST_CASE("FFT fast path equals the dense free-kernel application") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-12.0, 12.0, 1024);
    const double eps = 0.05;
    const WaveField psi0 = gaussian_packet(g, par, 1.0, 1.0, 0.7);

    const KernelMatrix K = build_kernel(g, eps, Potential::free(), par);
    const WaveField dense = K.apply(psi0);
    const WaveField fast = apply_free_kernel_fft(g, eps, par, psi0);
    CHECK(l2_distance(dense, fast) < 1e-12);
}

TEST_CASE("semigroup: applying K(eps) twice matches K(2 eps)") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-10.0, 10.0, 4096);
    const double eps = 0.02;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);

    const KernelMatrix K1 = build_kernel(g, eps, Potential::free(), par);
    const KernelMatrix K2 = build_kernel(g, 2.0 * eps, Potential::free(), par);
    const WaveField twice = K1.apply(K1.apply(psi0));
    const WaveField once = K2.apply(psi0);
    CHECK(l2_distance(twice, once) < 1e-4);
}

TEST_CASE("compose_chain: single element and two-slice consistency") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-10.0, 10.0, 512);
    const double eps = 0.1;
    const KernelMatrix K = build_kernel(g, eps, Potential::free(), par);

    const std::vector<KernelMatrix> single = {K};
    const KernelMatrix same = compose_chain(single);
    CHECK(same.epsilon() == doctest::Approx(eps));
    double worst = 0.0;
    for (std::size_t j = 0; j < same.values().size(); ++j)
        worst = std::max(worst, std::abs(same.values()[j] - K.values()[j]));
    CHECK(worst == 0.0);

    const std::vector<KernelMatrix> pair = {K, K};
    const KernelMatrix composed = compose_chain(pair);
    CHECK(composed.epsilon() == doctest::Approx(2.0 * eps));
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.5);
    const WaveField via_matrix = composed.apply(psi0);
    const WaveField via_state = K.apply(K.apply(psi0));
    CHECK(l2_distance(via_matrix, via_state) < 1e-10);
}

TEST_CASE("100 composed free slices reproduce the t=1 dispersing Gaussian") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-8.0, 8.0, 4096);
    const double eps = 0.01;
    const WaveField psi0 = gaussian_packet(g, par, 0.0, 1.0, 0.0);

    WaveField cur = psi0;
    for (int s = 0; s < 100; ++s) cur = apply_free_kernel_fft(g, eps, par, cur);
    const WaveField ref = oracles::free_gaussian(g, par, 0.0, 1.0, 0.0, 1.0);
    CHECK(l2_distance(cur, ref) < 1e-3);
}

TEST_CASE("harmonic chain against the Mehler kernel on a coherent packet") {
    // quarter-period chain; the slice kernel and the closed-form propagator
    // act on the same localized state and are compared away from the caustic
    // and the boundary
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-6.0, 6.0, 2048);
    const double t = std::numbers::pi / 2.0;
    const std::size_t n_slices = 64;
    const Potential pot = Potential::harmonic(1.0);

    const KernelMatrix slice = build_kernel(g, t / static_cast<double>(n_slices), pot, par);
    const WaveField psi0 = coherent_state(g, par, 1.0, 1.0, 0.0);
    WaveField via_chain = psi0;
    for (std::size_t s = 0; s < n_slices; ++s) via_chain = slice.apply(via_chain);

    const auto mehler = oracles::mehler_kernel(g, par, 1.0, t);
    WaveField via_mehler;
    via_mehler.grid = g;
    via_mehler.time = t;
    via_mehler.values.assign(g.n_points, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < g.n_points; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < g.n_points; ++k)
            acc += mehler[j * g.n_points + k] * psi0.values[k];
        via_mehler.values[j] = acc;
    }

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (std::abs(g.q(j)) > 3.0) continue;
        num += std::norm(via_chain.values[j] - via_mehler.values[j]);
        den += std::norm(via_mehler.values[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-2);

    // the matrix-level composition agrees with sequential application when
    // the chain is short and fat
    std::vector<KernelMatrix> fat;
    for (int s = 0; s < 4; ++s)
        fat.push_back(build_kernel(g, t / 4.0, pot, par));
    const KernelMatrix composed = compose_chain(fat);
    WaveField seq = psi0;
    for (int s = 0; s < 4; ++s) seq = fat[0].apply(seq);
    CHECK(l2_distance(composed.apply(psi0), seq) < 1e-8);
}

TEST_CASE("harmonic chain converges at first order in the slice duration") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-8.0, 8.0, 4096);
    const Potential pot = Potential::harmonic(1.0);
    const double t = 0.5;
    const WaveField psi0 = coherent_state(g, par, 1.0, 2.0, 0.0);

    auto chain_error = [&](double eps) {
        const auto n_slices = static_cast<std::size_t>(std::llround(t / eps));
        const KernelMatrix K = build_kernel(g, eps, pot, par);
        WaveField cur = psi0;
        for (std::size_t s = 0; s < n_slices; ++s) cur = K.apply(cur);
        const WaveField ref = coherent_state(g, par, 1.0, 2.0, t);
        return l2_distance(cur, ref);
    };
    const double e1 = chain_error(0.02);
    const double e2 = chain_error(0.01);
    const double ratio = e1 / e2;
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.3);
}

TEST_CASE("unitarity deviation is small on a faithful grid and reported") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-10.0, 10.0, 2048);
    const KernelMatrix K = build_kernel(g, 0.05, Potential::free(), par);
    const double dev = unitarity_deviation(K, par);
    CHECK(dev < 1e-2);
    CHECK(dev >= 0.0);
}

TEST_CASE("banded kernel zeroes far off-diagonal entries") {
    const PhysicalParams par;
    const SpatialGrid g = make_grid(-10.0, 10.0, 512);
    const double eps = 0.05;
    const KernelMatrix K = build_kernel(g, eps, Potential::free(), par, true);
    const double band = 8.0 * std::sqrt(par.hbar * eps / par.mass);
    for (std::size_t j = 0; j < g.n_points; j += 37) {
        for (std::size_t k = 0; k < g.n_points; k += 41) {
            if (std::abs(g.q(j) - g.q(k)) > band) {
                CHECK(std::abs(K.at(j, k)) == 0.0);
            } else {
                CHECK(std::abs(K.at(j, k)) > 0.0);
            }
        }
    }
}

TEST_CASE("grid mismatch is rejected") {
    const PhysicalParams par;
    const SpatialGrid a = make_grid(-10.0, 10.0, 256);
    const SpatialGrid b = make_grid(-12.0, 12.0, 256);
    const KernelMatrix Ka = build_kernel(a, 0.1, Potential::free(), par);
    const KernelMatrix Kb = build_kernel(b, 0.1, Potential::free(), par);
    const std::vector<KernelMatrix> mixed = {Ka, Kb};
    CHECK_THROWS_AS(compose_chain(mixed), GridMismatch);

    const WaveField psi = gaussian_packet(b, par, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(Ka.apply(psi), GridMismatch);
}
