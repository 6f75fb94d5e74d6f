#ifndef BOHMLAB_POTENTIAL_HPP
#define BOHMLAB_POTENTIAL_HPP

#include <string>
#include <vector>

#include "bohmlab/grid.hpp"

namespace bohmlab {

enum class PotentialKind { Free, Harmonic, Barrier, Custom };

// Scalar potential V(q).  Analytic kinds evaluate anywhere; Custom is a
// tabulation on a grid, interpolated linearly off the nodes.
class Potential {
  public:
    static Potential free();
    static Potential harmonic(double omega);
    static Potential barrier(double height, double width, double center);
    static Potential custom(const SpatialGrid& grid, std::vector<double> values);

    PotentialKind kind() const { return kind_; }
    double omega() const { return omega_; }

    double value(double q, const PhysicalParams& params) const;
    // dV/dq; zero for Free and (away from the edges) Barrier.
    double derivative(double q, const PhysicalParams& params) const;

    std::vector<double> tabulate(const SpatialGrid& grid, const PhysicalParams& params) const;

    double max_abs(const SpatialGrid& grid, const PhysicalParams& params) const;

    std::string describe() const;

  private:
    Potential() = default;

    PotentialKind kind_ = PotentialKind::Free;
    double omega_ = 0.0;
    double height_ = 0.0;
    double width_ = 0.0;
    double center_ = 0.0;
    SpatialGrid tab_grid_;
    std::vector<double> tab_values_;
};

}  // namespace bohmlab

#endif
