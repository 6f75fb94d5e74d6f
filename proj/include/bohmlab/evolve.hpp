#ifndef BOHMLAB_EVOLVE_HPP
#define BOHMLAB_EVOLVE_HPP

#include <string>
#include <vector>

#include "bohmlab/potential.hpp"
#include "bohmlab/wavefield.hpp"

namespace bohmlab {

enum class EvolutionMethod { SplitOperator, CrankNicolson };
enum class BoundaryKind { Periodic, HardWall };

struct EvolutionConfig {
    double dt = 1e-3;
    std::size_t n_steps = 0;
    EvolutionMethod method = EvolutionMethod::SplitOperator;
    BoundaryKind boundary = BoundaryKind::Periodic;
};

struct EvolutionResult {
    std::vector<WaveField> states;  // n_steps + 1 entries, initial state first
    double norm_drift = 0.0;        // max |norm - 1| seen over the run
    double energy_drift = 0.0;      // max |<H>(t) - <H>(0)|
    std::vector<std::string> warnings;
};

// Evolves psi under H = p^2/2m + V(q).  SplitOperator is Strang splitting
// with the kinetic step in momentum space (periodic boundaries);
// CrankNicolson is the Cayley finite-difference scheme (hard walls).
// Throws UnstableStep when the norm drifts by more than 1e-4.
EvolutionResult evolve(const WaveField& psi, const Potential& pot,
                       const EvolutionConfig& cfg, const PhysicalParams& params);

double expectation_q(const WaveField& psi);
double expectation_p(const WaveField& psi, const PhysicalParams& params);
double position_spread(const WaveField& psi);  // sqrt(<q^2> - <q>^2)
double energy(const WaveField& psi, const Potential& pot, const PhysicalParams& params);

}  // namespace bohmlab

#endif
