#include "bohmlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bohmlab {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string wavefield_csv(const WaveField& psi, const PhysicalParams& params) {
    std::string out;
    out += "# time=" + fmt17(psi.time) + " hbar=" + fmt17(params.hbar) +
           " mass=" + fmt17(params.mass) + "\n";
    out += "q,re_psi,im_psi\n";
    for (std::size_t j = 0; j < psi.values.size(); ++j) {
        out += fmt17(psi.grid.q(j)) + "," + fmt17(psi.values[j].real()) + "," +
               fmt17(psi.values[j].imag()) + "\n";
    }
    return out;
}

std::string polarfield_csv(const PolarField& polar, const PhysicalParams& params) {
    std::string out;
    out += "# time=" + fmt17(polar.time) + " hbar=" + fmt17(params.hbar) +
           " mass=" + fmt17(params.mass) + "\n";
    out += "q,R,S,node_mask\n";
    for (std::size_t j = 0; j < polar.R.size(); ++j) {
        out += fmt17(polar.grid.q(j)) + "," + fmt17(polar.R[j]) + "," + fmt17(polar.S[j]) + "," +
               (polar.node_mask[j] ? "1" : "0") + "\n";
    }
    return out;
}

std::string trajectories_csv(const TrajectorySet& traj) {
    std::string out = "time";
    for (std::size_t i = 0; i < traj.n_traj(); ++i) out += ",q_" + std::to_string(i + 1);
    out += "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        out += fmt17(traj.times[s]);
        for (std::size_t i = 0; i < traj.n_traj(); ++i)
            out += "," + fmt17(traj.positions[i][s]);
        out += "\n";
    }
    return out;
}

std::string conditional_stats_csv(const ConditionalStats& stats) {
    std::string out = "bin_center,mean_velocity,std_error,mean_forward,mean_backward,count\n";
    for (std::size_t j = 0; j < stats.bin_centers.size(); ++j) {
        out += fmt17(stats.bin_centers[j]) + "," + fmt17(stats.mean_velocity[j]) + "," +
               fmt17(stats.std_error[j]) + "," + fmt17(stats.mean_forward[j]) + "," +
               fmt17(stats.mean_backward[j]) + "," + std::to_string(stats.counts[j]) + "\n";
    }
    return out;
}

WaveField read_wavefield_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    double time = 0.0;
    std::vector<double> qs;
    std::vector<cplx> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("time=");
            if (pos != std::string::npos) time = std::stod(line.substr(pos + 5));
            continue;
        }
        if (line.rfind("q,", 0) == 0) continue;  // column header
        double q = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &q, &re, &im) != 3)
            throw Error("read_wavefield_csv: malformed row: " + line);
        qs.push_back(q);
        vals.push_back(cplx(re, im));
    }
    if (qs.size() < 8) throw Error("read_wavefield_csv: too few rows");
    WaveField psi;
    const double dq = qs[1] - qs[0];
    psi.grid = make_grid(qs.front(), qs.back() + dq, qs.size());
    psi.time = time;
    psi.values = std::move(vals);
    return psi;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_text_file: cannot open " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_text_file: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bohmlab
