#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "tvcmoga/hypervolume.hpp"
#include "tvcmoga/moga.hpp"
#include "tvcmoga/simulation.hpp"

namespace tvc {

// Sensitivity study over the (population size x crossover fraction) grid:
// one GA run per (ps, cf, seed) cell, A/B/C point extraction per front, and
// seed-averaged OF-vs-parameter summary matrices.

struct SweepGrid {
    std::vector<int> ps_values{90, 200, 500};
    std::vector<double> cf_values{0.4, 0.6, 0.8};
    int seeds_per_cell = 5;
    GaConfig base_ga;
    SimConfig sim = default_sim_config();

    void validate() const {
        if (ps_values.empty())
            throw InvalidParameter("sweep.ps_values must not be empty");
        if (cf_values.empty())
            throw InvalidParameter("sweep.cf_values must not be empty");
        if (seeds_per_cell < 1)
            throw InvalidParameter("sweep.seeds_per_cell must be >= 1");
        base_ga.validate();
        sim.validate();
    }
};

// Best-for-OF1 (A), best-for-OF2 (B), and compromise (C) members of one front.
struct CasePoints {
    Individual a;
    Individual b;
    Individual c;
};

// A = argmin of1, B = argmin of2, C = closest to the ideal point under
// min-max normalization over the front. Ties fall to the other objective
// (for C: to smaller of1). A single-member front yields that member thrice.
inline CasePoints extract_points(const ParetoFront& front) {
    if (front.members.empty())
        throw InvalidInput("extract_points: empty front");
    const std::vector<Individual>& m = front.members;
    auto by_of1 = [](const Individual& x, const Individual& y) {
        if (x.objectives.of1 != y.objectives.of1)
            return x.objectives.of1 < y.objectives.of1;
        return x.objectives.of2 < y.objectives.of2;
    };
    auto by_of2 = [](const Individual& x, const Individual& y) {
        if (x.objectives.of2 != y.objectives.of2)
            return x.objectives.of2 < y.objectives.of2;
        return x.objectives.of1 < y.objectives.of1;
    };
    CasePoints out;
    out.a = *std::min_element(m.begin(), m.end(), by_of1);
    out.b = *std::min_element(m.begin(), m.end(), by_of2);

    double min1 = out.a.objectives.of1, max1 = out.b.objectives.of1;
    double min2 = out.b.objectives.of2, max2 = out.a.objectives.of2;
    double span1 = max1 > min1 ? max1 - min1 : 1.0;
    double span2 = max2 > min2 ? max2 - min2 : 1.0;
    auto ideal_distance = [&](const Individual& x) {
        double n1 = (x.objectives.of1 - min1) / span1;
        double n2 = (x.objectives.of2 - min2) / span2;
        return std::sqrt(n1 * n1 + n2 * n2);
    };
    out.c = m.front();
    double best = ideal_distance(out.c);
    for (const Individual& x : m) {
        double d = ideal_distance(x);
        if (d < best || (d == best && by_of1(x, out.c))) {
            best = d;
            out.c = x;
        }
    }
    return out;
}

struct SweepCell {
    int ps = 0;
    double cf = 0.0;
    uint64_t seed = 0;
    int seed_index = 0;
    ParetoFront front;
    CasePoints points;
    double hypervolume = 0.0; // against the report-wide reference
    int hv_excluded = 0;
    std::string error; // non-empty if this cell failed; other fields unset
};

// Seed-averaged (ps x cf) matrix for one point type and one objective.
struct SummaryMatrix {
    std::vector<std::vector<double>> values; // [ps_index][cf_index]
    int argmin_ps_index = 0;
    int argmin_cf_index = 0;
    bool tie = false; // another cell attains the same minimum
};

struct SweepSummaries {
    SummaryMatrix a_of1, a_of2, b_of1, b_of2, c_of1, c_of2;
};

struct SweepReport {
    std::vector<int> ps_values;
    std::vector<double> cf_values;
    int seeds_per_cell = 1;
    uint64_t base_seed = 0;
    std::vector<SweepCell> cells; // ps-major, then cf, then seed
    ObjectivePair hv_ref{0.0, 0.0};
    SweepSummaries summaries;
};

// Factory producing the (pure) fitness used by one cell; called once per cell
// so cells stay independent under parallel execution.
using FitnessFactory = std::function<FitnessFn(const SweepCell&)>;

namespace detail {

inline SummaryMatrix summarize_matrix(const SweepReport& report,
                                      const std::function<double(const SweepCell&)>& value) {
    const size_t n_ps = report.ps_values.size();
    const size_t n_cf = report.cf_values.size();
    SummaryMatrix m;
    m.values.assign(n_ps, std::vector<double>(n_cf, 0.0));
    std::vector<std::vector<int>> counts(n_ps, std::vector<int>(n_cf, 0));
    for (const SweepCell& cell : report.cells) {
        if (!cell.error.empty())
            continue;
        size_t pi = 0, ci = 0;
        for (size_t i = 0; i < n_ps; ++i)
            if (report.ps_values[i] == cell.ps)
                pi = i;
        for (size_t i = 0; i < n_cf; ++i)
            if (report.cf_values[i] == cell.cf)
                ci = i;
        m.values[pi][ci] += value(cell);
        ++counts[pi][ci];
    }
    double best = std::numeric_limits<double>::infinity();
    for (size_t pi = 0; pi < n_ps; ++pi) {
        for (size_t ci = 0; ci < n_cf; ++ci) {
            if (counts[pi][ci] > 0)
                m.values[pi][ci] /= counts[pi][ci];
            else
                m.values[pi][ci] = std::numeric_limits<double>::quiet_NaN();
            double v = m.values[pi][ci];
            if (std::isfinite(v)) {
                if (v < best) {
                    best = v;
                    m.argmin_ps_index = static_cast<int>(pi);
                    m.argmin_cf_index = static_cast<int>(ci);
                    m.tie = false;
                } else if (v == best) {
                    m.tie = true;
                }
            }
        }
    }
    return m;
}

} // namespace detail

// Seed-averaged summary matrices plus the argmin cell per matrix
// (lexicographically first on ties, with the tie flagged).
inline SweepSummaries summarize(const SweepReport& report) {
    SweepSummaries s;
    s.a_of1 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.a.objectives.of1;
    });
    s.a_of2 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.a.objectives.of2;
    });
    s.b_of1 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.b.objectives.of1;
    });
    s.b_of2 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.b.objectives.of2;
    });
    s.c_of1 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.c.objectives.of1;
    });
    s.c_of2 = detail::summarize_matrix(report, [](const SweepCell& c) {
        return c.points.c.objectives.of2;
    });
    return s;
}

// Run the full grid. Cells are independent jobs; `jobs` bounds the worker
// count. Replicate r of every (ps, cf) cell uses seed base_seed + r, so
// comparisons across cells are paired. Per-cell failures are recorded in the
// report and the remaining cells continue. Deterministic given the grid.
inline SweepReport run_grid(const SweepGrid& grid,
                            const FitnessFactory& fitness_factory,
                            unsigned jobs = 1) {
    grid.validate();
    if (!fitness_factory)
        throw InvalidInput("run_grid: fitness factory is required");

    SweepReport report;
    report.ps_values = grid.ps_values;
    report.cf_values = grid.cf_values;
    report.seeds_per_cell = grid.seeds_per_cell;
    report.base_seed = grid.base_ga.rng_seed;
    for (int ps : grid.ps_values)
        for (double cf : grid.cf_values)
            for (int r = 0; r < grid.seeds_per_cell; ++r) {
                SweepCell cell;
                cell.ps = ps;
                cell.cf = cf;
                cell.seed = grid.base_ga.rng_seed + static_cast<uint64_t>(r);
                cell.seed_index = r;
                report.cells.push_back(std::move(cell));
            }

    auto run_cell = [&](SweepCell& cell) {
        try {
            GaConfig ga = grid.base_ga;
            ga.ps = cell.ps;
            ga.cf = cell.cf;
            ga.rng_seed = cell.seed;
            EvolveResult res = evolve(ga, fitness_factory(cell));
            cell.front = std::move(res.front);
            cell.points = extract_points(cell.front);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };

    if (jobs <= 1) {
        for (SweepCell& cell : report.cells)
            run_cell(cell);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= report.cells.size())
                    return;
                run_cell(report.cells[i]);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    // Report-wide hypervolume reference: twice the largest objective values
    // observed on any front, so cells are comparable.
    double max1 = 0.0, max2 = 0.0;
    for (const SweepCell& cell : report.cells) {
        if (!cell.error.empty())
            continue;
        for (const Individual& m : cell.front.members) {
            max1 = std::max(max1, m.objectives.of1);
            max2 = std::max(max2, m.objectives.of2);
        }
    }
    report.hv_ref = ObjectivePair{max1 > 0.0 ? 2.0 * max1 : 1.0,
                                  max2 > 0.0 ? 2.0 * max2 : 1.0};
    for (SweepCell& cell : report.cells) {
        if (!cell.error.empty())
            continue;
        std::vector<ObjectivePair> objs;
        for (const Individual& m : cell.front.members)
            objs.push_back(m.objectives);
        HypervolumeResult hv = hypervolume(objs, report.hv_ref);
        cell.hypervolume = hv.volume;
        cell.hv_excluded = hv.excluded;
    }
    report.summaries = summarize(report);
    return report;
}

} // namespace tvc
