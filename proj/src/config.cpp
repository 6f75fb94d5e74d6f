#include "bohmlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "bohmlab/io.hpp"
#include "bohmlab/states.hpp"

namespace bohmlab {

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
    bool consumed = false;
};

using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Document lex(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            doc[section];  // sections may legitimately be empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto& sec = doc[section];
        const auto it = sec.find(key);
        if (it != sec.end())
            throw ConfigError("duplicate key '" + key + "' in section [" + section +
                              "]: lines " + std::to_string(it->second.line) + " and " +
                              std::to_string(lineno));
        sec[key] = Entry{value, lineno, false};
    }
    return doc;
}

class Reader {
  public:
    explicit Reader(Document doc) : doc_(std::move(doc)) {}

    bool has(const std::string& section, const std::string& key) {
        const auto s = doc_.find(section);
        return s != doc_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) {
        auto s = doc_.find(section);
        if (s == doc_.end()) return fallback;
        auto it = s->second.find(key);
        if (it == s->second.end()) return fallback;
        it->second.consumed = true;
        return it->second.value;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) {
        auto s = doc_.find(section);
        if (s == doc_.end()) return fallback;
        auto it = s->second.find(key);
        if (it == s->second.end()) return fallback;
        it->second.consumed = true;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.value, &pos);
            if (pos != it->second.value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(it->second.line) + ": key '" + key +
                              "' expects a number, got '" + it->second.value + "'");
        }
    }

    std::size_t get_size(const std::string& section, const std::string& key,
                         std::size_t fallback) {
        const double v = get_double(section, key, static_cast<double>(fallback));
        if (v < 0.0 || v != std::floor(v))
            throw ConfigError("key '" + key + "' in section [" + section +
                              "] expects a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) {
        const std::string v = get_string(section, key, fallback ? "true" : "false");
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError("key '" + key + "' in section [" + section + "] expects true/false");
    }

    void reject_unknown(const std::set<std::string>& known_sections) {
        for (const auto& [sec, entries] : doc_) {
            if (known_sections.count(sec) == 0)
                throw ConfigError("unknown section [" + sec + "]");
            for (const auto& [key, entry] : entries) {
                if (!entry.consumed)
                    throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" +
                                      key + "' in section [" + sec + "]");
            }
        }
    }

  private:
    Document doc_;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
    Reader r(lex(text));
    RunConfig cfg;

    cfg.task = r.get_string("run", "task", "evolve");
    const std::set<std::string> tasks = {"evolve",   "trajectories", "propagate",
                                         "ensemble", "picture-check", "verify"};
    if (tasks.count(cfg.task) == 0)
        throw ConfigError("unknown task '" + cfg.task + "'");
    cfg.seed = static_cast<std::uint64_t>(r.get_size("run", "seed", 1));

    const double q_min = r.get_double("grid", "q_min", -20.0);
    const double q_max = r.get_double("grid", "q_max", 20.0);
    const std::size_t n_points = r.get_size("grid", "n_points", 1024);
    cfg.grid = make_grid(q_min, q_max, n_points);

    cfg.params = make_params(r.get_double("physics", "hbar", 1.0),
                             r.get_double("physics", "mass", 1.0));

    cfg.initial.type = r.get_string("initial", "type", "gaussian");
    const std::set<std::string> initials = {"gaussian", "two_packet", "coherent"};
    if (initials.count(cfg.initial.type) == 0)
        throw ConfigError("unknown initial state type '" + cfg.initial.type + "'");
    cfg.initial.center = r.get_double("initial", "center", 0.0);
    cfg.initial.width = r.get_double("initial", "width", 1.0);
    cfg.initial.p0 = r.get_double("initial", "p0", 0.0);
    cfg.initial.sep = r.get_double("initial", "sep", 10.0);
    cfg.initial.p0a = r.get_double("initial", "p0a", 0.0);
    cfg.initial.p0b = r.get_double("initial", "p0b", 0.0);
    cfg.initial.omega = r.get_double("initial", "omega", 1.0);
    cfg.initial.displacement = r.get_double("initial", "displacement", 0.0);

    cfg.potential.type = r.get_string("potential", "type", "free");
    const std::set<std::string> pots = {"free", "harmonic", "barrier"};
    if (pots.count(cfg.potential.type) == 0)
        throw ConfigError("unknown potential type '" + cfg.potential.type + "'");
    cfg.potential.omega = r.get_double("potential", "omega", 1.0);
    cfg.potential.height = r.get_double("potential", "height", 1.0);
    cfg.potential.width = r.get_double("potential", "width", 1.0);
    cfg.potential.center = r.get_double("potential", "center", 0.0);

    cfg.evolution.dt = r.get_double("evolution", "dt", 1e-3);
    if (!(cfg.evolution.dt > 0.0)) throw ConfigError("evolution dt must be positive");
    cfg.evolution.n_steps = r.get_size("evolution", "n_steps", 1000);
    const std::string method = r.get_string("evolution", "method", "split_operator");
    if (method == "split_operator") {
        cfg.evolution.method = EvolutionMethod::SplitOperator;
    } else if (method == "crank_nicolson") {
        cfg.evolution.method = EvolutionMethod::CrankNicolson;
    } else {
        throw ConfigError("unknown evolution method '" + method + "'");
    }
    const std::string boundary = r.get_string("evolution", "boundary",
                                              method == "crank_nicolson" ? "hard_wall"
                                                                         : "periodic");
    if (boundary == "periodic") {
        cfg.evolution.boundary = BoundaryKind::Periodic;
    } else if (boundary == "hard_wall") {
        cfg.evolution.boundary = BoundaryKind::HardWall;
    } else {
        throw ConfigError("unknown boundary '" + boundary + "'");
    }
    cfg.snapshot_stride = std::max<std::size_t>(1, r.get_size("evolution", "snapshot_stride", 100));

    cfg.trajectories.n_traj = r.get_size("trajectories", "n_traj", 100);
    cfg.trajectories.seeds_from_density = r.get_bool("trajectories", "seeds_from_density", true);
    cfg.trajectories.seed_lo = r.get_double("trajectories", "seed_lo", 0.0);
    cfg.trajectories.seed_hi = r.get_double("trajectories", "seed_hi", 0.0);
    cfg.trajectories.node_threshold = r.get_double("trajectories", "node_threshold", 1e-6);

    cfg.propagate.epsilon = r.get_double("propagate", "epsilon", 0.01);
    if (!(cfg.propagate.epsilon > 0.0)) throw ConfigError("propagate epsilon must be positive");
    cfg.propagate.n_slices = r.get_size("propagate", "n_slices", 100);
    cfg.propagate.banded = r.get_bool("propagate", "banded", false);

    cfg.ensemble.n_paths = r.get_size("ensemble", "n_paths", 10000);
    cfg.ensemble.bin_width_cells = r.get_double("ensemble", "bin_width_cells", 4.0);
    cfg.ensemble.stat_step = r.get_size("ensemble", "stat_step", 0);
    cfg.ensemble.store_stride = std::max<std::size_t>(1, r.get_size("ensemble", "store_stride", 50));
    cfg.ensemble.node_threshold = r.get_double("ensemble", "node_threshold", 1e-6);

    cfg.verify.node_threshold = r.get_double("verify", "node_threshold", 1e-3);

    r.reject_unknown({"", "run", "grid", "physics", "initial", "potential", "evolution",
                      "trajectories", "propagate", "ensemble", "verify"});
    return cfg;
}

Potential build_potential(const RunConfig& cfg) {
    if (cfg.potential.type == "free") return Potential::free();
    if (cfg.potential.type == "harmonic") return Potential::harmonic(cfg.potential.omega);
    return Potential::barrier(cfg.potential.height, cfg.potential.width, cfg.potential.center);
}

WaveField build_initial_state(const RunConfig& cfg) {
    if (cfg.initial.type == "gaussian")
        return gaussian_packet(cfg.grid, cfg.params, cfg.initial.center, cfg.initial.width,
                               cfg.initial.p0);
    if (cfg.initial.type == "two_packet")
        return two_packet_superposition(cfg.grid, cfg.params, cfg.initial.sep, cfg.initial.width,
                                        cfg.initial.p0a, cfg.initial.p0b);
    return coherent_state(cfg.grid, cfg.params, cfg.initial.omega, cfg.initial.displacement, 0.0);
}

std::string RunConfig::echo() const {
    std::string s;
    s += "[run]\n";
    s += "task = " + task + "\n";
    s += "seed = " + std::to_string(seed) + "\n";
    s += "\n[grid]\n";
    s += "q_min = " + fmt17(grid.q_min) + "\n";
    s += "q_max = " + fmt17(grid.q_max) + "\n";
    s += "n_points = " + std::to_string(grid.n_points) + "\n";
    s += "\n[physics]\n";
    s += "hbar = " + fmt17(params.hbar) + "\n";
    s += "mass = " + fmt17(params.mass) + "\n";
    s += "\n[initial]\n";
    s += "type = " + initial.type + "\n";
    s += "center = " + fmt17(initial.center) + "\n";
    s += "width = " + fmt17(initial.width) + "\n";
    s += "p0 = " + fmt17(initial.p0) + "\n";
    s += "sep = " + fmt17(initial.sep) + "\n";
    s += "p0a = " + fmt17(initial.p0a) + "\n";
    s += "p0b = " + fmt17(initial.p0b) + "\n";
    s += "omega = " + fmt17(initial.omega) + "\n";
    s += "displacement = " + fmt17(initial.displacement) + "\n";
    s += "\n[potential]\n";
    s += "type = " + potential.type + "\n";
    s += "omega = " + fmt17(potential.omega) + "\n";
    s += "height = " + fmt17(potential.height) + "\n";
    s += "width = " + fmt17(potential.width) + "\n";
    s += "center = " + fmt17(potential.center) + "\n";
    s += "\n[evolution]\n";
    s += "dt = " + fmt17(evolution.dt) + "\n";
    s += "n_steps = " + std::to_string(evolution.n_steps) + "\n";
    s += std::string("method = ") +
         (evolution.method == EvolutionMethod::SplitOperator ? "split_operator"
                                                             : "crank_nicolson") +
         "\n";
    s += std::string("boundary = ") +
         (evolution.boundary == BoundaryKind::Periodic ? "periodic" : "hard_wall") + "\n";
    s += "snapshot_stride = " + std::to_string(snapshot_stride) + "\n";
    s += "\n[trajectories]\n";
    s += "n_traj = " + std::to_string(trajectories.n_traj) + "\n";
    s += std::string("seeds_from_density = ") +
         (trajectories.seeds_from_density ? "true" : "false") + "\n";
    s += "seed_lo = " + fmt17(trajectories.seed_lo) + "\n";
    s += "seed_hi = " + fmt17(trajectories.seed_hi) + "\n";
    s += "node_threshold = " + fmt17(trajectories.node_threshold) + "\n";
    s += "\n[propagate]\n";
    s += "epsilon = " + fmt17(propagate.epsilon) + "\n";
    s += "n_slices = " + std::to_string(propagate.n_slices) + "\n";
    s += std::string("banded = ") + (propagate.banded ? "true" : "false") + "\n";
    s += "\n[ensemble]\n";
    s += "n_paths = " + std::to_string(ensemble.n_paths) + "\n";
    s += "bin_width_cells = " + fmt17(ensemble.bin_width_cells) + "\n";
    s += "stat_step = " + std::to_string(ensemble.stat_step) + "\n";
    s += "store_stride = " + std::to_string(ensemble.store_stride) + "\n";
    s += "node_threshold = " + fmt17(ensemble.node_threshold) + "\n";
    s += "\n[verify]\n";
    s += "node_threshold = " + fmt17(verify.node_threshold) + "\n";
    return s;
}

}  // namespace bohmlab
