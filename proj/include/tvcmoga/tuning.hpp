#pragma once

#include <span>

#include "tvcmoga/moga.hpp"
#include "tvcmoga/simulation.hpp"

namespace tvc {

// Glue between the optimizer's genome and the controller: genes are ordered
// (K_i^b, K_p^b, K_d^b, K_i^r, K_p^r, K_d^r).

inline GainSchedule gain_schedule_from_genes(std::span<const double> genes) {
    if (genes.size() != 6)
        throw InvalidInput("gain_schedule_from_genes: expected 6 genes");
    GainSchedule g;
    g.base = {genes[0], genes[1], genes[2]};
    g.regulation = {genes[3], genes[4], genes[5]};
    return g;
}

inline std::array<double, 6> genes_from_gain_schedule(const GainSchedule& g) {
    return {g.base[0], g.base[1], g.base[2],
            g.regulation[0], g.regulation[1], g.regulation[2]};
}

// Pure, reentrant fitness: closed-loop objectives of the genome's gain
// schedule under the given scenario.
inline FitnessFn make_controller_fitness(SimConfig cfg) {
    cfg.validate();
    return [cfg](const Genome& genome) {
        return evaluate(gain_schedule_from_genes(genome.genes), cfg);
    };
}

} // namespace tvc
