#ifndef BOHMLAB_CONFIG_HPP
#define BOHMLAB_CONFIG_HPP

#include <cstdint>
#include <string>

#include "bohmlab/evolve.hpp"
#include "bohmlab/grid.hpp"
#include "bohmlab/potential.hpp"

namespace bohmlab {

struct InitialSpec {
    std::string type = "gaussian";  // gaussian | two_packet | coherent
    double center = 0.0;
    double width = 1.0;
    double p0 = 0.0;
    double sep = 10.0;
    double p0a = 0.0;
    double p0b = 0.0;
    double omega = 1.0;
    double displacement = 0.0;
};

struct PotentialSpec {
    std::string type = "free";  // free | harmonic | barrier
    double omega = 1.0;
    double height = 1.0;
    double width = 1.0;
    double center = 0.0;
};

struct TrajectoriesSpec {
    std::size_t n_traj = 100;
    double seed_lo = 0.0;  // used when seeds_from_density is false
    double seed_hi = 0.0;
    bool seeds_from_density = true;
    double node_threshold = 1e-6;
};

struct PropagateSpec {
    double epsilon = 0.01;
    std::size_t n_slices = 100;
    bool banded = false;
};

struct EnsembleSpec {
    std::size_t n_paths = 10000;
    double bin_width_cells = 4.0;
    std::size_t stat_step = 0;  // zero selects the last interior step
    std::size_t store_stride = 50;
    double node_threshold = 1e-6;
};

struct VerifySpec {
    // R-quotient residuals are meaningful down to ~1e-3 of the peak amplitude
    double node_threshold = 1e-3;
};

// Fully validated run description; every default is materialized so the
// config echo is complete.
struct RunConfig {
    std::string task = "evolve";
    std::uint64_t seed = 1;

    SpatialGrid grid;
    PhysicalParams params;
    InitialSpec initial;
    PotentialSpec potential;
    EvolutionConfig evolution;
    std::size_t snapshot_stride = 100;

    TrajectoriesSpec trajectories;
    PropagateSpec propagate;
    EnsembleSpec ensemble;
    VerifySpec verify;

    std::string output_dir = "out";
    std::size_t n_threads = 0;

    // canonical text with all defaults written out
    std::string echo() const;
};

// Parses the key = value document (sections in brackets, '#' comments).
// Errors are line-anchored; duplicate keys report both lines; unknown keys
// and sections are rejected by name.
RunConfig parse_config(const std::string& text);

Potential build_potential(const RunConfig& cfg);
WaveField build_initial_state(const RunConfig& cfg);

}  // namespace bohmlab

#endif
