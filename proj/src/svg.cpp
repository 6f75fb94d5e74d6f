#include "bohmlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bohmlab {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string emit_svg_trajectories(const TrajectorySet& traj,
                                  const std::vector<WaveField>& density_background) {
    if (density_background.empty())
        throw Error("emit_svg_trajectories: density background required");
    const SpatialGrid& grid = density_background.front().grid;
    const double t0 = density_background.front().time;
    const double t1 = density_background.back().time;

    constexpr double W = 900.0, H = 600.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
    const double pw = W - ml - mr, ph = H - mt - mb;

    auto x_of = [&](double q) { return ml + pw * (q - grid.q_min) / grid.length(); };
    auto y_of = [&](double t) {
        return t1 > t0 ? mt + ph * (t - t0) / (t1 - t0) : mt;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(W) + "\" height=\"" +
           fmt2(H) + "\" viewBox=\"0 0 " + fmt2(W) + " " + fmt2(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // grayscale density backdrop, one horizontal band per snapshot (coarsened
    // to at most 160 cells across)
    double rho_max = 0.0;
    for (const auto& s : density_background)
        for (const auto& z : s.values) rho_max = std::max(rho_max, std::norm(z));
    if (rho_max <= 0.0) rho_max = 1.0;

    const std::size_t n_cells = std::min<std::size_t>(160, grid.n_points);
    const std::size_t cell_pts = grid.n_points / n_cells;
    const double band_h = ph / static_cast<double>(density_background.size());
    for (std::size_t s = 0; s < density_background.size(); ++s) {
        const auto& snap = density_background[s];
        const double y = mt + band_h * static_cast<double>(s);
        for (std::size_t c = 0; c < n_cells; ++c) {
            double acc = 0.0;
            for (std::size_t j = c * cell_pts; j < (c + 1) * cell_pts; ++j)
                acc += std::norm(snap.values[j]);
            acc /= static_cast<double>(cell_pts);
            const int shade =
                255 - static_cast<int>(std::round(200.0 * std::sqrt(acc / rho_max)));
            if (shade >= 250) continue;  // skip near-white cells
            const double x = ml + pw * static_cast<double>(c) / static_cast<double>(n_cells);
            svg += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" +
                   fmt2(pw / static_cast<double>(n_cells) + 0.5) + "\" height=\"" +
                   fmt2(band_h + 0.5) + "\" fill=\"rgb(" + std::to_string(shade) + "," +
                   std::to_string(shade) + "," + std::to_string(shade) + ")\"/>\n";
        }
    }

    for (std::size_t i = 0; i < traj.n_traj(); ++i) {
        svg += "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"0.8\" points=\"";
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            svg += fmt2(x_of(traj.positions[i][s])) + "," + fmt2(y_of(traj.times[s])) + " ";
        }
        svg += "\"/>\n";
    }

    // axes
    svg += "<rect x=\"" + fmt2(ml) + "\" y=\"" + fmt2(mt) + "\" width=\"" + fmt2(pw) +
           "\" height=\"" + fmt2(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt2(ml) + "\" y=\"" + fmt2(H - 15.0) +
           "\" font-size=\"14\">q = " + fmt2(grid.q_min) + "</text>\n";
    svg += "<text x=\"" + fmt2(W - mr - 80.0) + "\" y=\"" + fmt2(H - 15.0) +
           "\" font-size=\"14\">q = " + fmt2(grid.q_max) + "</text>\n";
    svg += "<text x=\"8\" y=\"" + fmt2(mt + 14.0) + "\" font-size=\"14\">t = " + fmt2(t0) +
           "</text>\n";
    svg += "<text x=\"8\" y=\"" + fmt2(mt + ph) + "\" font-size=\"14\">t = " + fmt2(t1) +
           "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace bohmlab
