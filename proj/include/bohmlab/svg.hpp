#ifndef BOHMLAB_SVG_HPP
#define BOHMLAB_SVG_HPP

#include <string>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

// Trajectory polylines over a grayscale |psi|^2 backdrop (time on the
// vertical axis).  Deterministic output; an empty trajectory set yields a
// valid backdrop-only document.
std::string emit_svg_trajectories(const TrajectorySet& traj,
                                  const std::vector<WaveField>& density_background);

}  // namespace bohmlab

#endif
