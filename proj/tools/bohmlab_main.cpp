#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "bohmlab/io.hpp"
#include "bohmlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bohmlab: wave evolution, Bohm trajectories, sliced propagators and "
                 "stochastic path ensembles on a 1D grid"};

    std::string config_path;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t threads = 0;
    bool list_tasks = false;
    std::string task_override;

    app.add_option("config", config_path, "run configuration file");
    app.add_option("--output-dir", output_dir, "directory for artifacts")->capture_default_str();
    app.add_option("--seed", seed, "override the config rng seed")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--threads", threads, "worker threads (0 = auto)")->capture_default_str();
    app.add_option("--task", task_override, "override the config task");
    app.add_flag("--list-tasks", list_tasks, "print the task catalog and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_tasks) {
        for (const auto& t : bohmlab::task_catalog()) std::printf("%s\n", t.c_str());
        return 0;
    }
    if (config_path.empty()) {
        std::fprintf(stderr, "error: config path required (or --list-tasks)\n");
        return 2;
    }

    bohmlab::RunConfig cfg;
    try {
        cfg = bohmlab::parse_config(bohmlab::read_text_file(config_path));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    cfg.output_dir = output_dir;
    cfg.n_threads = threads;
    if (seed_given) cfg.seed = seed;
    if (!task_override.empty()) cfg.task = task_override;

    const bohmlab::RunReport rep = bohmlab::run_task(cfg);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!rep.error.empty()) std::fprintf(stderr, "error: %s\n", rep.error.c_str());
    for (const auto& m : rep.metrics)
        std::printf("%-28s %13.6e  (tol %s %g)  %s\n", m.name.c_str(), m.value,
                    m.comparison.c_str(), m.tolerance, m.pass ? "pass" : "FAIL");
    std::printf("%s: %s (%.2fs)\n", rep.task.c_str(), rep.all_pass() ? "all pass" : "FAILED",
                rep.wall_time_s);
    return rep.all_pass() ? 0 : 1;
}
