#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "tvcmoga/errors.hpp"
#include "tvcmoga/hypervolume.hpp"
#include "tvcmoga/objective.hpp"
#include "tvcmoga/rng.hpp"

namespace tvc {

// Multi-objective GA over the six-gain genome: NSGA-II ranking and crowding,
// tournament selection, intermediate crossover, Gaussian mutation with bound
// clipping, optional forward-ring migration between subpopulations.

struct GeneBounds {
    double lo;
    double hi;

    friend bool operator==(const GeneBounds&, const GeneBounds&) = default;
};

struct Genome {
    std::vector<double> genes;
    std::vector<GeneBounds> bounds; // one [lo, hi] per gene

    friend bool operator==(const Genome& a, const Genome& b) {
        return a.genes == b.genes;
    }
};

inline void clip_to_bounds(Genome& g) {
    for (size_t i = 0; i < g.genes.size(); ++i)
        g.genes[i] = std::clamp(g.genes[i], g.bounds[i].lo, g.bounds[i].hi);
}

struct Individual {
    Genome genome;
    ObjectivePair objectives{};
    int rank = -1;         // nondomination front index, 0-based
    double crowding = 0.0; // crowding distance, may be +inf
    bool evaluated = false;
};

enum class MigrationDirection { Forward };

struct GaConfig {
    int ps = 90;          // population size (per subpopulation)
    double cf = 0.6;      // crossover fraction of non-elite children
    int n_subpops = 1;    // migration is inert with a single subpopulation
    double migration_fraction = 0.2;
    int migration_interval = 20; // generations between migrations
    MigrationDirection migration_direction = MigrationDirection::Forward;
    int max_generations = 100;
    double fitness_limit = 1e-4; // stop when min(of1 + of2) <= limit
    int elite_count = 2;         // elite children per subpopulation
    int tournament_size = 2;
    double crossover_ratio = 1.0;
    double mutation_sigma = 0.1; // stddev as a fraction of each gene's range
    uint64_t rng_seed = 1;
    std::vector<GeneBounds> bounds =
        std::vector<GeneBounds>(6, GeneBounds{-5.0, 5.0});
    ObjectivePair log_hv_ref{1e6, 1e6}; // reference for the generation log only

    void validate() const {
        if (ps < 4)
            throw InvalidParameter("ga.population_size must be >= 4");
        if (!(cf >= 0.0 && cf <= 1.0))
            throw InvalidParameter("ga.crossover_fraction must be in [0, 1]");
        if (n_subpops < 1)
            throw InvalidParameter("ga.subpopulations must be >= 1");
        if (!(migration_fraction >= 0.0 && migration_fraction <= 1.0))
            throw InvalidParameter("ga.migration_fraction must be in [0, 1]");
        if (migration_interval < 1)
            throw InvalidParameter("ga.migration_interval must be >= 1");
        if (max_generations < 1)
            throw InvalidParameter("ga.max_generations must be >= 1");
        if (elite_count < 0 || elite_count >= ps)
            throw InvalidParameter("ga.elite_count must be in [0, population_size)");
        if (tournament_size < 2)
            throw InvalidParameter("ga.tournament_size must be >= 2");
        if (!(crossover_ratio >= 0.0))
            throw InvalidParameter("ga.crossover_ratio must be >= 0");
        if (!(mutation_sigma >= 0.0))
            throw InvalidParameter("ga.mutation_sigma must be >= 0");
        if (bounds.empty())
            throw InvalidParameter("ga.bounds must not be empty");
        for (const GeneBounds& b : bounds)
            if (!(b.lo < b.hi))
                throw InvalidParameter("ga.bounds: lo must be < hi");
    }
};

using FitnessFn = std::function<ObjectivePair(const Genome&)>;

// Strict Pareto dominance: no worse in both objectives, better in at least one.
inline bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    return a.of1 <= b.of1 && a.of2 <= b.of2 && (a.of1 < b.of1 || a.of2 < b.of2);
}

// Fast nondominated sort (Deb et al.). Assigns ranks in place and returns the
// fronts as index lists, best first.
inline std::vector<std::vector<size_t>>
nondominated_sort(std::vector<Individual>& pop) {
    const size_t n = pop.size();
    for (const Individual& ind : pop)
        if (!ind.evaluated)
            throw InvalidInput("nondominated_sort: unevaluated individual");
    std::vector<std::vector<size_t>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<size_t>> fronts;
    std::vector<size_t> current;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (dominates(pop[i].objectives, pop[j].objectives))
                dominated_by[i].push_back(j);
            else if (dominates(pop[j].objectives, pop[i].objectives))
                ++domination_count[i];
        }
        if (domination_count[i] == 0) {
            pop[i].rank = 0;
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<size_t> next;
        for (size_t i : current) {
            for (size_t j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    pop[j].rank = static_cast<int>(fronts.size());
                    next.push_back(j);
                }
            }
        }
        current = std::move(next);
    }
    return fronts;
}

// Crowding distance within one front: boundary members get +inf, interior
// members the sum of normalized neighbor gaps per objective. Fronts of size
// <= 2 are all boundary.
inline void crowding_distance(std::vector<Individual>& pop,
                              const std::vector<size_t>& front) {
    const double inf = std::numeric_limits<double>::infinity();
    if (front.empty())
        return;
    if (front.size() <= 2) {
        for (size_t i : front)
            pop[i].crowding = inf;
        return;
    }
    for (size_t i : front)
        pop[i].crowding = 0.0;
    auto accumulate_axis = [&](auto key) {
        std::vector<size_t> order(front);
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return key(pop[a]) < key(pop[b]); });
        double span = key(pop[order.back()]) - key(pop[order.front()]);
        pop[order.front()].crowding = inf;
        pop[order.back()].crowding = inf;
        if (span <= 0.0)
            return;
        for (size_t k = 1; k + 1 < order.size(); ++k)
            pop[order[k]].crowding +=
                (key(pop[order[k + 1]]) - key(pop[order[k - 1]])) / span;
    };
    accumulate_axis([](const Individual& ind) { return ind.objectives.of1; });
    accumulate_axis([](const Individual& ind) { return ind.objectives.of2; });
}

// Lower rank wins; equal rank prefers the larger crowding distance.
inline bool crowded_less(const Individual& a, const Individual& b) {
    return a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding);
}

// k-way tournament with replacement. Exact (rank, crowding) ties are broken
// by a coin flip from the rng stream.
template <class Rng>
size_t tournament_select(const std::vector<Individual>& pop, int k, Rng& rng) {
    if (pop.empty())
        throw InvalidInput("tournament_select: empty population");
    if (k < 2)
        throw InvalidParameter("tournament_select: k must be >= 2");
    size_t best = static_cast<size_t>(rng.below(pop.size()));
    for (int i = 1; i < k; ++i) {
        size_t cand = static_cast<size_t>(rng.below(pop.size()));
        if (crowded_less(pop[cand], pop[best]))
            best = cand;
        else if (pop[cand].rank == pop[best].rank &&
                 pop[cand].crowding == pop[best].crowding &&
                 rng.uniform01() < 0.5)
            best = cand;
    }
    return best;
}

// Intermediate crossover: child_j = p1_j + ratio * r_j * (p2_j - p1_j) with
// r_j ~ U[0,1) per gene, clipped to the shared bounds.
template <class Rng>
Genome intermediate_crossover(const Genome& p1, const Genome& p2, double ratio,
                              Rng& rng) {
    if (p1.genes.size() != p2.genes.size() || p1.bounds != p2.bounds)
        throw InvalidInput("intermediate_crossover: parents must share bounds");
    Genome child = p1;
    for (size_t j = 0; j < child.genes.size(); ++j)
        child.genes[j] += ratio * rng.uniform01() * (p2.genes[j] - p1.genes[j]);
    clip_to_bounds(child);
    return child;
}

// Gaussian mutation with per-gene stddev sigma_fraction * (hi - lo), clipped
// to bounds so mutants are always feasible.
template <class Rng>
Genome mutate(const Genome& g, double sigma_fraction, Rng& rng) {
    Genome out = g;
    for (size_t j = 0; j < out.genes.size(); ++j) {
        double range = out.bounds[j].hi - out.bounds[j].lo;
        out.genes[j] += rng.normal() * sigma_fraction * range;
    }
    clip_to_bounds(out);
    return out;
}

namespace detail {

// Ordering used for elite/migrant picks: (rank, crowding) with a random
// jitter breaking exact ties deterministically for a given rng stream.
template <class Rng>
std::vector<size_t> quality_order(const std::vector<Individual>& pop, Rng& rng) {
    std::vector<double> jitter(pop.size());
    for (double& x : jitter)
        x = rng.uniform01();
    std::vector<size_t> order(pop.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (pop[a].rank != pop[b].rank)
            return pop[a].rank < pop[b].rank;
        if (pop[a].crowding != pop[b].crowding)
            return pop[a].crowding > pop[b].crowding;
        return jitter[a] < jitter[b];
    });
    return order;
}

} // namespace detail

// Forward-ring migration: the top ceil(fraction * |subpop|) of each
// subpopulation (by rank, then crowding) replace the worst of the next one.
// Sources are copied, never removed. Ranks and crowding must be current.
template <class Rng>
void migrate(std::vector<std::vector<Individual>>& subpops, double fraction,
             MigrationDirection direction, Rng& rng) {
    (void)direction; // only Forward exists
    if (subpops.size() < 2 || fraction <= 0.0)
        return;
    std::vector<std::vector<Individual>> migrants(subpops.size());
    for (size_t s = 0; s < subpops.size(); ++s) {
        const std::vector<Individual>& src = subpops[s];
        size_t n_mig = static_cast<size_t>(
            std::ceil(fraction * static_cast<double>(src.size())));
        n_mig = std::min(n_mig, src.size());
        std::vector<size_t> order = detail::quality_order(src, rng);
        for (size_t i = 0; i < n_mig; ++i)
            migrants[s].push_back(src[order[i]]);
    }
    for (size_t s = 0; s < subpops.size(); ++s) {
        size_t target = (s + 1) % subpops.size();
        std::vector<Individual>& dst = subpops[target];
        std::vector<size_t> order = detail::quality_order(dst, rng);
        size_t n_mig = std::min(migrants[s].size(), dst.size());
        for (size_t i = 0; i < n_mig; ++i)
            dst[order[order.size() - 1 - i]] = migrants[s][i];
    }
}

// Final rank-0 members, deduplicated by genome, sorted by objectives.
struct ParetoFront {
    std::vector<Individual> members;
};

inline ParetoFront extract_front(std::vector<Individual> pop) {
    std::vector<std::vector<size_t>> fronts = nondominated_sort(pop);
    ParetoFront front;
    if (fronts.empty())
        return front;
    for (size_t i : fronts.front())
        front.members.push_back(pop[i]);
    std::sort(front.members.begin(), front.members.end(),
              [](const Individual& a, const Individual& b) {
                  if (a.objectives.of1 != b.objectives.of1)
                      return a.objectives.of1 < b.objectives.of1;
                  if (a.objectives.of2 != b.objectives.of2)
                      return a.objectives.of2 < b.objectives.of2;
                  return a.genome.genes < b.genome.genes;
              });
    front.members.erase(
        std::unique(front.members.begin(), front.members.end(),
                    [](const Individual& a, const Individual& b) {
                        return a.genome == b.genome;
                    }),
        front.members.end());
    return front;
}

struct GenerationStats {
    int generation = 0; // 1-based; generation 1 is the evaluated initial population
    double best_of1 = 0.0;
    double best_of2 = 0.0;
    double mean_of1 = 0.0;
    double mean_of2 = 0.0;
    double hypervolume = 0.0;
    int front_size = 0;
};

struct EvolveResult {
    ParetoFront front;
    std::vector<GenerationStats> log;
};

// Per-generation observer, e.g. for front-regression checks in tests.
using EvolveObserver =
    std::function<void(int generation, const std::vector<Individual>&)>;

namespace detail {

inline std::vector<Individual> random_population(const GaConfig& cfg,
                                                 SplitMix64 rng) {
    std::vector<Individual> pop(static_cast<size_t>(cfg.ps));
    for (Individual& ind : pop) {
        ind.genome.bounds = cfg.bounds;
        ind.genome.genes.resize(cfg.bounds.size());
        for (size_t j = 0; j < cfg.bounds.size(); ++j)
            ind.genome.genes[j] = rng.uniform(cfg.bounds[j].lo, cfg.bounds[j].hi);
    }
    return pop;
}

inline void evaluate_population(std::vector<Individual>& pop,
                                const FitnessFn& fitness) {
    for (Individual& ind : pop) {
        if (ind.evaluated)
            continue;
        ind.objectives = fitness(ind.genome);
        if (!std::isfinite(ind.objectives.of1) || !std::isfinite(ind.objectives.of2))
            throw NumericError("evolve: fitness returned non-finite objectives");
        ind.evaluated = true;
    }
}

// NSGA-II environmental selection: whole fronts while they fit, then the
// most crowded members of the split front.
inline std::vector<Individual> truncate_by_rank(std::vector<Individual>& pool,
                                                size_t target) {
    std::vector<std::vector<size_t>> fronts = nondominated_sort(pool);
    for (const std::vector<size_t>& f : fronts)
        crowding_distance(pool, f);
    std::vector<Individual> next;
    next.reserve(target);
    for (const std::vector<size_t>& f : fronts) {
        if (next.size() + f.size() <= target) {
            for (size_t i : f)
                next.push_back(pool[i]);
        } else {
            std::vector<size_t> order(f);
            std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                if (pool[a].crowding != pool[b].crowding)
                    return pool[a].crowding > pool[b].crowding;
                return a < b;
            });
            for (size_t i : order) {
                if (next.size() == target)
                    break;
                next.push_back(pool[i]);
            }
        }
        if (next.size() == target)
            break;
    }
    return next;
}

} // namespace detail

// NSGA-II-style loop over one or more subpopulations. Deterministic for a
// given (cfg, fitness): every random draw flows from cfg.rng_seed through
// per-(generation, subpopulation, role) forked streams.
inline EvolveResult evolve(const GaConfig& cfg, const FitnessFn& fitness,
                           const EvolveObserver& observer = {}) {
    cfg.validate();
    if (!fitness)
        throw InvalidInput("evolve: fitness function is required");

    // Stream roles; keeps draw order independent of evaluation order.
    constexpr uint64_t kInit = 1, kSelect = 2, kChild = 3, kMigrate = 4;

    SplitMix64 master(cfg.rng_seed);
    std::vector<std::vector<Individual>> subpops;
    subpops.reserve(static_cast<size_t>(cfg.n_subpops));
    for (int s = 0; s < cfg.n_subpops; ++s)
        subpops.push_back(detail::random_population(
            cfg, master.fork(kInit, static_cast<uint64_t>(s))));

    EvolveResult result;
    auto union_pop = [&]() {
        std::vector<Individual> all;
        for (const std::vector<Individual>& sp : subpops)
            all.insert(all.end(), sp.begin(), sp.end());
        return all;
    };

    for (int gen = 1;; ++gen) {
        for (std::vector<Individual>& sp : subpops)
            detail::evaluate_population(sp, fitness);

        std::vector<Individual> all = union_pop();
        ParetoFront front = extract_front(all);
        GenerationStats stats;
        stats.generation = gen;
        stats.best_of1 = stats.best_of2 = std::numeric_limits<double>::infinity();
        double min_sum = std::numeric_limits<double>::infinity();
        for (const Individual& ind : all) {
            stats.best_of1 = std::min(stats.best_of1, ind.objectives.of1);
            stats.best_of2 = std::min(stats.best_of2, ind.objectives.of2);
            stats.mean_of1 += ind.objectives.of1;
            stats.mean_of2 += ind.objectives.of2;
            min_sum = std::min(min_sum, ind.objectives.of1 + ind.objectives.of2);
        }
        stats.mean_of1 /= static_cast<double>(all.size());
        stats.mean_of2 /= static_cast<double>(all.size());
        std::vector<ObjectivePair> front_objs;
        for (const Individual& m : front.members)
            front_objs.push_back(m.objectives);
        stats.hypervolume = hypervolume(front_objs, cfg.log_hv_ref).volume;
        stats.front_size = static_cast<int>(front.members.size());
        result.log.push_back(stats);
        if (observer)
            observer(gen, all);

        if (gen >= cfg.max_generations || min_sum <= cfg.fitness_limit) {
            result.front = std::move(front);
            break;
        }

        const uint64_t g = static_cast<uint64_t>(gen);
        for (size_t s = 0; s < subpops.size(); ++s) {
            std::vector<Individual>& parents = subpops[s];
            std::vector<std::vector<size_t>> fronts = nondominated_sort(parents);
            for (const std::vector<size_t>& f : fronts)
                crowding_distance(parents, f);

            SplitMix64 sel_rng = master.fork(kSelect, g, s);
            const size_t ps = parents.size();
            const size_t n_elite =
                std::min(static_cast<size_t>(cfg.elite_count), ps);
            const size_t n_cross = static_cast<size_t>(
                std::lround(cfg.cf * static_cast<double>(ps - n_elite)));
            const size_t n_mut = ps - n_elite - n_cross;

            std::vector<Individual> children;
            children.reserve(ps);
            std::vector<size_t> order = detail::quality_order(parents, sel_rng);
            for (size_t i = 0; i < n_elite; ++i)
                children.push_back(parents[order[i]]);
            for (size_t i = 0; i < n_cross; ++i) {
                size_t p1 = tournament_select(parents, cfg.tournament_size, sel_rng);
                size_t p2 = tournament_select(parents, cfg.tournament_size, sel_rng);
                SplitMix64 child_rng = master.fork(kChild, g, s * 1000003 + i);
                Individual child;
                child.genome = intermediate_crossover(parents[p1].genome,
                                                      parents[p2].genome,
                                                      cfg.crossover_ratio, child_rng);
                children.push_back(std::move(child));
            }
            for (size_t i = 0; i < n_mut; ++i) {
                size_t p = tournament_select(parents, cfg.tournament_size, sel_rng);
                SplitMix64 child_rng =
                    master.fork(kChild, g, s * 1000003 + n_cross + i);
                Individual child;
                child.genome =
                    mutate(parents[p].genome, cfg.mutation_sigma, child_rng);
                children.push_back(std::move(child));
            }
            detail::evaluate_population(children, fitness);

            std::vector<Individual> pool = std::move(parents);
            pool.insert(pool.end(), children.begin(), children.end());
            subpops[s] = detail::truncate_by_rank(pool, ps);
        }

        if (subpops.size() >= 2 && (gen + 1) % cfg.migration_interval == 0) {
            for (std::vector<Individual>& sp : subpops) {
                std::vector<std::vector<size_t>> fronts = nondominated_sort(sp);
                for (const std::vector<size_t>& f : fronts)
                    crowding_distance(sp, f);
            }
            SplitMix64 mig_rng = master.fork(kMigrate, g);
            migrate(subpops, cfg.migration_fraction, cfg.migration_direction,
                    mig_rng);
        }
    }
    return result;
}

} // namespace tvc
