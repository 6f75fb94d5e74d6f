#ifndef BOHMLAB_IO_HPP
#define BOHMLAB_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/ensemble.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// 17 significant digits; round-trips doubles exactly.
std::string fmt17(double v);

std::string wavefield_csv(const WaveField& psi, const PhysicalParams& params);
std::string polarfield_csv(const PolarField& polar, const PhysicalParams& params);
std::string trajectories_csv(const TrajectorySet& traj);
std::string conditional_stats_csv(const ConditionalStats& stats);

WaveField read_wavefield_csv(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace bohmlab

#endif
