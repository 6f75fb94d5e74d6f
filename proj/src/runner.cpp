#include "bohmlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "json.hpp"

#include "bohmlab/ensemble.hpp"
#include "bohmlab/io.hpp"
#include "bohmlab/picture.hpp"
#include "bohmlab/propagator.hpp"
#include "bohmlab/states.hpp"
#include "bohmlab/svg.hpp"

namespace bohmlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

bool RunReport::all_pass() const {
    if (!error.empty()) return false;
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

std::string RunReport::to_json() const {
    ordered_json j;
    j["task"] = task;
    j["config"] = config_echo;
    ordered_json ms = ordered_json::object();
    for (const auto& m : metrics) {
        ordered_json e;
        e["value"] = m.value;
        e["tolerance"] = m.tolerance;
        e["comparison"] = m.comparison;
        e["pass"] = m.pass;
        ms[m.name] = e;
    }
    j["metrics"] = ms;
    j["warnings"] = warnings;
    j["artifacts"] = artifacts;
    j["wall_time_s"] = wall_time_s;
    if (!error.empty()) j["error"] = error;
    j["all_pass"] = all_pass();
    return j.dump(2) + "\n";
}

namespace {

Metric make_metric(const std::string& name, double value, double tol,
                   const std::string& cmp = "<=") {
    Metric m;
    m.name = name;
    m.value = value;
    m.tolerance = tol;
    m.comparison = cmp;
    m.pass = cmp == "<=" ? value <= tol : value >= tol;
    return m;
}

std::string snapshot_name(std::size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "state_%06zu.csv", idx);
    return buf;
}

// stratified quantile seeds over the initial density
std::vector<double> density_seeds(const WaveField& psi0, std::size_t n) {
    const DensitySampler sampler(psi0.grid, psi0.density_profile());
    std::vector<double> seeds(n);
    for (std::size_t i = 0; i < n; ++i)
        seeds[i] = sampler.sample((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    return seeds;
}

std::size_t count_order_violations(const TrajectorySet& traj) {
    // seeds are monotone; ordering must persist at every output time
    std::size_t violations = 0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (std::size_t i = 0; i + 1 < traj.n_traj(); ++i) {
            if (traj.positions[i + 1][s] - traj.positions[i][s] < -1e-12) ++violations;
        }
    }
    return violations;
}

void task_evolve(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    const WaveField psi0 = build_initial_state(cfg);
    const Potential pot = build_potential(cfg);
    const EvolutionResult res = evolve(psi0, pot, cfg.evolution, cfg.params);
    rep.warnings.insert(rep.warnings.end(), res.warnings.begin(), res.warnings.end());

    for (std::size_t s = 0; s < res.states.size(); s += cfg.snapshot_stride) {
        const std::string name = snapshot_name(s);
        write_text_file(dir / name, wavefield_csv(res.states[s], cfg.params));
        rep.artifacts.push_back(name);
    }
    write_text_file(dir / "final_state.csv", wavefield_csv(res.states.back(), cfg.params));
    rep.artifacts.push_back("final_state.csv");

    const double norm_tol = cfg.evolution.method == EvolutionMethod::SplitOperator ? 1e-8 : 1e-6;
    rep.metrics.push_back(make_metric("norm_drift", res.norm_drift, norm_tol));
    if (cfg.evolution.method == EvolutionMethod::SplitOperator)
        rep.metrics.push_back(make_metric("energy_drift", res.energy_drift, 1e-8));
}

void task_trajectories(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    const WaveField psi0 = build_initial_state(cfg);
    const Potential pot = build_potential(cfg);
    const EvolutionResult res = evolve(psi0, pot, cfg.evolution, cfg.params);
    rep.warnings.insert(rep.warnings.end(), res.warnings.begin(), res.warnings.end());

    std::vector<double> seeds;
    if (cfg.trajectories.seeds_from_density) {
        seeds = density_seeds(psi0, cfg.trajectories.n_traj);
    } else {
        seeds.resize(cfg.trajectories.n_traj);
        const double lo = cfg.trajectories.seed_lo, hi = cfg.trajectories.seed_hi;
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seeds[i] = lo + (hi - lo) * static_cast<double>(i) /
                                std::max<std::size_t>(1, seeds.size() - 1);
    }

    const TrajectorySet traj = integrate_trajectories(res.states, seeds, cfg.params,
                                                      cfg.trajectories.node_threshold,
                                                      cfg.n_threads);

    // thin the stored trajectory mesh for the CSV/SVG artifacts
    TrajectorySet thinned;
    thinned.seeds = traj.seeds;
    thinned.frozen = traj.frozen;
    std::vector<WaveField> backdrop;
    for (std::size_t s = 0; s < traj.times.size(); s += cfg.snapshot_stride) {
        thinned.times.push_back(traj.times[s]);
        backdrop.push_back(res.states[s]);
    }
    thinned.positions.resize(traj.n_traj());
    for (std::size_t i = 0; i < traj.n_traj(); ++i)
        for (std::size_t s = 0; s < traj.times.size(); s += cfg.snapshot_stride)
            thinned.positions[i].push_back(traj.positions[i][s]);

    write_text_file(dir / "trajectories.csv", trajectories_csv(thinned));
    rep.artifacts.push_back("trajectories.csv");
    write_text_file(dir / "trajectories.svg", emit_svg_trajectories(thinned, backdrop));
    rep.artifacts.push_back("trajectories.svg");

    rep.metrics.push_back(make_metric("order_violations",
                                      static_cast<double>(count_order_violations(traj)), 0.0));

    if (cfg.trajectories.seeds_from_density && cfg.trajectories.n_traj >= 1000) {
        double worst_l1 = 0.0;
        for (std::size_t s = 0; s < traj.times.size(); s += cfg.snapshot_stride) {
            std::vector<double> xs(traj.n_traj());
            for (std::size_t i = 0; i < traj.n_traj(); ++i) xs[i] = traj.positions[i][s];
            worst_l1 = std::max(worst_l1,
                                histogram_l1_distance(xs, cfg.grid,
                                                      res.states[s].density_profile(),
                                                      4.0 * cfg.grid.dq));
        }
        rep.metrics.push_back(make_metric("equivariance_l1", worst_l1, 0.05));
    }
}

void task_propagate(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    const WaveField psi0 = build_initial_state(cfg);
    const Potential pot = build_potential(cfg);
    const double eps = cfg.propagate.epsilon;

    const std::size_t snap_stride =
        std::max<std::size_t>(1, cfg.propagate.n_slices / 10);
    WaveField cur = psi0;
    auto maybe_snapshot = [&](std::size_t slice) {
        if (slice % snap_stride != 0 && slice != cfg.propagate.n_slices) return;
        char name[48];
        std::snprintf(name, sizeof(name), "slice_%04zu.csv", slice);
        write_text_file(dir / name, wavefield_csv(cur, cfg.params));
        rep.artifacts.push_back(name);
    };
    maybe_snapshot(0);
    if (pot.kind() == PotentialKind::Free && !cfg.propagate.banded) {
        for (std::size_t s = 0; s < cfg.propagate.n_slices; ++s) {
            cur = apply_free_kernel_fft(cfg.grid, eps, cfg.params, cur);
            maybe_snapshot(s + 1);
        }
    } else {
        const KernelMatrix K =
            build_kernel(cfg.grid, eps, pot, cfg.params, cfg.propagate.banded, cfg.n_threads);
        rep.warnings.insert(rep.warnings.end(), K.warnings().begin(), K.warnings().end());
        for (std::size_t s = 0; s < cfg.propagate.n_slices; ++s) {
            cur = K.apply(cur);
            maybe_snapshot(s + 1);
        }
    }
    write_text_file(dir / "propagate_final.csv", wavefield_csv(cur, cfg.params));
    rep.artifacts.push_back("propagate_final.csv");

    if (pot.kind() == PotentialKind::Free && cfg.initial.type == "gaussian") {
        // closed-form dispersing Gaussian as reference
        const double t = eps * static_cast<double>(cfg.propagate.n_slices);
        const double m = cfg.params.mass, hbar = cfg.params.hbar;
        const double s0 = cfg.initial.width;
        const cplx st = s0 * cplx(1.0, hbar * t / (2.0 * m * s0 * s0));
        WaveField ref;
        ref.grid = cfg.grid;
        ref.time = t;
        ref.values.resize(cfg.grid.n_points);
        const cplx amp = std::pow(2.0 * std::numbers::pi * s0 * s0, -0.25) *
                         std::sqrt(cplx(s0, 0.0) / st);
        const double qc = cfg.initial.center + cfg.initial.p0 * t / m;
        for (std::size_t j = 0; j < cfg.grid.n_points; ++j) {
            const double q = cfg.grid.q(j);
            const double ph = cfg.initial.p0 * (q - qc) / hbar +
                              cfg.initial.p0 * cfg.initial.p0 * t / (2.0 * m * hbar);
            ref.values[j] = amp * std::exp(-(q - qc) * (q - qc) / (4.0 * s0 * st) +
                                           cplx(0.0, ph));
        }
        rep.metrics.push_back(make_metric("l2_error_vs_exact", l2_distance(cur, ref), 1e-3));
        const double alias = 2.0 * std::numbers::pi * hbar * eps / (m * cfg.grid.dq);
        if (alias < 0.5 * cfg.grid.length())
            rep.warnings.push_back(
                "alias displacement " + fmt17(alias) +
                " below half the domain; sliced quadrature images may overlap the state");
    }
    rep.metrics.push_back(make_metric("final_norm_error", std::abs(cur.norm() - 1.0), 1e-3));
}

void task_ensemble(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    const WaveField psi0 = build_initial_state(cfg);
    const Potential pot = build_potential(cfg);
    const EvolutionResult res = evolve(psi0, pot, cfg.evolution, cfg.params);
    rep.warnings.insert(rep.warnings.end(), res.warnings.begin(), res.warnings.end());

    const std::size_t n_steps = cfg.evolution.n_steps;
    const std::size_t stat_step =
        cfg.ensemble.stat_step > 0 && cfg.ensemble.stat_step < n_steps ? cfg.ensemble.stat_step
                                                                       : n_steps - 1;

    PathEnsembleOptions opt;
    opt.node_threshold = cfg.ensemble.node_threshold;
    opt.store_stride = cfg.ensemble.store_stride;
    opt.stat_indices = {stat_step};
    opt.bin_width_cells = cfg.ensemble.bin_width_cells;
    opt.n_threads = cfg.n_threads;
    const PathEnsemble ens =
        sample_paths(res.states, cfg.ensemble.n_paths, cfg.seed, cfg.params, opt);

    const double bin_width = cfg.ensemble.bin_width_cells * cfg.grid.dq;
    BinSpec bins{cfg.grid.q_min, cfg.grid.q_max, bin_width};
    const ConditionalStats stats = conditional_mean_velocity(ens, stat_step, bins);
    write_text_file(dir / "conditional_stats.csv", conditional_stats_csv(stats));
    rep.artifacts.push_back("conditional_stats.csv");

    // thinned path output
    {
        std::string csv = "time";
        const std::size_t n_dump = std::min<std::size_t>(ens.n_paths, 200);
        for (std::size_t i = 0; i < n_dump; ++i) csv += ",x_" + std::to_string(i + 1);
        csv += "\n";
        for (std::size_t s = 0; s < ens.times.size(); ++s) {
            csv += fmt17(ens.times[s]);
            for (std::size_t i = 0; i < n_dump; ++i) csv += "," + fmt17(ens.position(i, s));
            csv += "\n";
        }
        write_text_file(dir / "paths_thinned.csv", csv);
        rep.artifacts.push_back("paths_thinned.csv");
    }

    // compare binned mean velocity against the Moyal mean momentum / m
    const MomentumField pbar =
        moyal_mean_momentum(res.states[stat_step], cfg.params, cfg.ensemble.node_threshold);
    std::size_t checked = 0, outside = 0;
    double worst_z = 0.0;
    for (std::size_t b = 0; b < stats.bin_centers.size(); ++b) {
        if (stats.counts[b] < 200 || stats.std_error[b] <= 0.0) continue;
        const std::size_t j = cfg.grid.nearest_index(stats.bin_centers[b]);
        if (!pbar.valid_mask[j]) continue;
        const double vref = pbar.P_B[j] / cfg.params.mass;
        const double z = std::abs(stats.mean_velocity[b] - vref) / stats.std_error[b];
        worst_z = std::max(worst_z, z);
        ++checked;
        if (z > 3.0) ++outside;
    }
    rep.metrics.push_back(make_metric("bins_checked", static_cast<double>(checked), 1.0, ">="));
    rep.metrics.push_back(make_metric("bins_outside_3se", static_cast<double>(outside), 0.0));
    rep.metrics.push_back(make_metric("worst_z_score", worst_z, 3.0));

    // a Bohm trajectory against its re-integration from the binned table
    {
        const std::size_t peak = static_cast<std::size_t>(
            std::max_element(psi0.values.begin(), psi0.values.end(),
                             [](const cplx& a, const cplx& b) {
                                 return std::norm(a) < std::norm(b);
                             }) -
            psi0.values.begin());
        const double seed = cfg.grid.q(peak);
        const TrajectorySet bohm = integrate_trajectories(
            res.states, {seed}, cfg.params, cfg.ensemble.node_threshold, cfg.n_threads);

        double x = seed, worst = 0.0;
        for (std::size_t k = 1; k < n_steps; ++k) {
            const auto v = ens.table.mean_velocity(k, x);
            if (v) x += *v * ens.dt;
            worst = std::max(worst, std::abs(x - bohm.positions[0][k + 1]));
        }
        rep.metrics.push_back(make_metric("reintegration_deviation", worst, 2.0 * bin_width));
    }
}

void task_picture_check(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    (void)dir;
    const WaveField psi = build_initial_state(cfg);
    const PolarField polar = polar_decompose(psi, cfg.params, cfg.verify.node_threshold);

    auto add = [&](const std::string& prefix, const PictureCheckReport& r, double conj_tol) {
        rep.metrics.push_back(make_metric(prefix + "_err_q", r.err_q, conj_tol));
        rep.metrics.push_back(make_metric(prefix + "_err_p", r.err_p, conj_tol));
        rep.metrics.push_back(make_metric(prefix + "_err_q2", r.err_q2, conj_tol));
        rep.metrics.push_back(make_metric(prefix + "_err_p2", r.err_p2, conj_tol));
        rep.metrics.push_back(make_metric(prefix + "_norm_deviation", r.norm_deviation, 1e-14));
        rep.metrics.push_back(
            make_metric(prefix + "_roundtrip_deviation", r.roundtrip_deviation, 1e-14));
    };
    // closed-form phases carry exact gradients and meet the strict identity
    // tolerance; the state-derived phase uses a measured gradient
    add("linear_phase", picture_check(psi, action_phase_linear(cfg.grid, 0.75, 0.2), cfg.params),
        1e-10);
    add("quadratic_phase",
        picture_check(psi, action_phase_quadratic(cfg.grid, 0.3, -0.4), cfg.params), 1e-10);
    add("state_phase", picture_check(psi, action_phase_from_state(polar), cfg.params), 1e-6);
}

void task_verify(const RunConfig& cfg, const fs::path& dir, RunReport& rep) {
    const Potential pot = build_potential(cfg);

    PolarField pa, pb;
    WaveField wa, wb;
    double tol = 1e-3;  // numerically evolved snapshot pair
    if (cfg.initial.type == "coherent" && cfg.potential.type == "harmonic" &&
        cfg.initial.omega == cfg.potential.omega) {
        // analytic state pair, sampled directly
        const double t = cfg.evolution.dt * static_cast<double>(cfg.evolution.n_steps / 2);
        wa = coherent_state(cfg.grid, cfg.params, cfg.initial.omega, cfg.initial.displacement, t);
        wb = coherent_state(cfg.grid, cfg.params, cfg.initial.omega, cfg.initial.displacement,
                            t + cfg.evolution.dt);
        tol = 1e-4;
    } else {
        const WaveField psi0 = build_initial_state(cfg);
        const EvolutionResult res = evolve(psi0, pot, cfg.evolution, cfg.params);
        rep.warnings.insert(rep.warnings.end(), res.warnings.begin(), res.warnings.end());
        const std::size_t mid = res.states.size() / 2;
        wa = res.states[mid];
        wb = res.states[mid + 1];
    }
    pa = polar_decompose(wa, cfg.params, cfg.verify.node_threshold);
    pb = polar_decompose(wb, cfg.params, cfg.verify.node_threshold);

    write_text_file(dir / "polar_t0.csv", polarfield_csv(pa, cfg.params));
    rep.artifacts.push_back("polar_t0.csv");

    const ResidualField qhj = qhj_residual(pa, pb, pot, cfg.params);
    const ResidualField cont = continuity_residual(wa, wb, cfg.params, cfg.verify.node_threshold);
    rep.metrics.push_back(make_metric("qhj_residual_l2", qhj.l2, tol));
    rep.metrics.push_back(make_metric("continuity_residual_l2", cont.l2, tol));
}

}  // namespace

std::vector<std::string> task_catalog() {
    return {"evolve", "trajectories", "propagate", "ensemble", "picture-check", "verify"};
}

RunReport run_task(const RunConfig& cfg) {
    RunReport rep;
    rep.task = cfg.task;
    rep.config_echo = cfg.echo();

    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    const auto t_start = std::chrono::steady_clock::now();
    try {
        if (cfg.task == "evolve") {
            task_evolve(cfg, dir, rep);
        } else if (cfg.task == "trajectories") {
            task_trajectories(cfg, dir, rep);
        } else if (cfg.task == "propagate") {
            task_propagate(cfg, dir, rep);
        } else if (cfg.task == "ensemble") {
            task_ensemble(cfg, dir, rep);
        } else if (cfg.task == "picture-check") {
            task_picture_check(cfg, dir, rep);
        } else if (cfg.task == "verify") {
            task_verify(cfg, dir, rep);
        } else {
            throw TaskError("unknown task '" + cfg.task + "'");
        }
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    try {
        write_text_file(dir / "report.json", rep.to_json());
        rep.artifacts.push_back("report.json");
    } catch (const std::exception& e) {
        if (rep.error.empty()) rep.error = e.what();
    }
    return rep;
}

}  // namespace bohmlab
