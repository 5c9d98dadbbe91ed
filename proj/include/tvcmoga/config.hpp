#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvcmoga/errors.hpp"
#include "tvcmoga/io.hpp"
#include "tvcmoga/simulation.hpp"
#include "tvcmoga/sweep.hpp"

namespace tvc {

// Run-config file: a single versioned JSON manifest covering plant, actuator,
// controller, simulation, GA, and sweep settings. Parsing is strict: unknown
// keys are rejected and every validation failure names the offending key.

struct PlotToggles {
    bool trajectory = true;
    bool pareto = true;
    bool matrix = true;
};

struct RunConfig {
    std::string output_dir; // empty: resolved by the CLI (--out, env, cwd)
    SimConfig sim;
    GainSchedule gains; // literal gains for the simulate command
    GaConfig ga;
    std::vector<int> sweep_ps_values{90, 200, 500};
    std::vector<double> sweep_cf_values{0.4, 0.6, 0.8};
    int sweep_seeds_per_cell = 5;
    PlotToggles plots;

    SweepGrid sweep_grid() const {
        SweepGrid grid;
        grid.ps_values = sweep_ps_values;
        grid.cf_values = sweep_cf_values;
        grid.seeds_per_cell = sweep_seeds_per_cell;
        grid.base_ga = ga;
        grid.sim = sim;
        return grid;
    }
};

namespace detail {

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path + ": must be an object");
}

inline void reject_unknown_keys(const json& j, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    require_object(j, path);
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key: " + path + "." + item.key());
    }
}

inline double get_number(const json& j, const std::string& path, const char* key,
                         double fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(path + "." + key + ": must be a number");
    return v.get<double>();
}

inline int get_int(const json& j, const std::string& path, const char* key,
                   int fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw ConfigError(path + "." + key + ": must be an integer");
    return v.get<int>();
}

inline bool get_bool(const json& j, const std::string& path, const char* key,
                     bool fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean())
        throw ConfigError(path + "." + key + ": must be a boolean");
    return v.get<bool>();
}

template <size_t N>
std::array<double, N> get_array(const json& j, const std::string& path,
                                const char* key, std::array<double, N> fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != N)
        throw ConfigError(path + "." + key + ": must be an array of " +
                          std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (size_t i = 0; i < N; ++i) {
        if (!v[i].is_number())
            throw ConfigError(path + "." + key + ": must be numeric");
        out[i] = v[i].get<double>();
    }
    return out;
}

inline MembershipTriple parse_membership(const json& j, const std::string& path,
                                         MembershipTriple fallback) {
    reject_unknown_keys(j, path, {"universe", "shapes"});
    MembershipTriple m = fallback;
    if (j.contains("universe")) {
        auto u = get_array<2>(j, path, "universe", {fallback.lo, fallback.hi});
        m.lo = u[0];
        m.hi = u[1];
    }
    if (j.contains("shapes")) {
        const json& shapes = j.at("shapes");
        if (!shapes.is_array() || shapes.size() != 3)
            throw ConfigError(path + ".shapes: must be 3 [left, peak, right] triples");
        for (size_t i = 0; i < 3; ++i) {
            const json& s = shapes[i];
            if (!s.is_array() || s.size() != 3 || !s[0].is_number())
                throw ConfigError(path + ".shapes: must be 3 [left, peak, right] triples");
            m.shapes[i] = TriangleShape{s[0].get<double>(), s[1].get<double>(),
                                        s[2].get<double>()};
        }
    }
    return m;
}

} // namespace detail

inline RunConfig parse_run_config(const json& j) {
    using detail::get_array;
    using detail::get_bool;
    using detail::get_int;
    using detail::get_number;
    using detail::reject_unknown_keys;

    reject_unknown_keys(j, "config",
                        {"schema_version", "output_dir", "plant", "actuator",
                         "controller", "sim", "gains", "ga", "sweep", "plots"});
    if (!j.contains("schema_version"))
        throw ConfigError("config.schema_version: required");
    if (!j.at("schema_version").is_number_integer() ||
        j.at("schema_version").get<int>() != 1)
        throw ConfigError("config.schema_version: expected 1");

    RunConfig cfg;
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            throw ConfigError("config.output_dir: must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }

    // plant
    PlantParams plant = default_plant();
    if (j.contains("plant")) {
        const json& p = j.at("plant");
        reject_unknown_keys(p, "plant", {"m", "l", "inertia", "a", "g"});
        try {
            plant = make_plant(get_number(p, "plant", "m", plant.m),
                               get_number(p, "plant", "l", plant.l),
                               get_number(p, "plant", "inertia", plant.inertia),
                               get_number(p, "plant", "a", plant.a),
                               get_number(p, "plant", "g", plant.g));
        } catch (const InvalidParameter& e) {
            throw ConfigError(e.what());
        }
    }
    cfg.sim.plant = plant;

    // sim
    if (j.contains("sim")) {
        const json& s = j.at("sim");
        reject_unknown_keys(s, "sim",
                            {"theta0", "theta_dot0", "horizon", "dt",
                             "divergence_limit", "penalty"});
        cfg.sim.theta0 = get_number(s, "sim", "theta0", cfg.sim.theta0);
        cfg.sim.theta_dot0 = get_number(s, "sim", "theta_dot0", cfg.sim.theta_dot0);
        cfg.sim.horizon = get_number(s, "sim", "horizon", cfg.sim.horizon);
        cfg.sim.dt = get_number(s, "sim", "dt", cfg.sim.dt);
        cfg.sim.divergence_limit =
            get_number(s, "sim", "divergence_limit", cfg.sim.divergence_limit);
        cfg.sim.penalty = get_number(s, "sim", "penalty", cfg.sim.penalty);
    }

    // actuator
    if (j.contains("actuator")) {
        const json& a = j.at("actuator");
        reject_unknown_keys(a, "actuator", {"phi_max"});
        cfg.sim.phi_max = get_number(a, "actuator", "phi_max", cfg.sim.phi_max);
    }

    // controller defaults track the scenario before explicit overrides apply
    cfg.sim.controller = default_controller_config(cfg.sim.theta0, cfg.sim.horizon);
    if (j.contains("controller")) {
        const json& c = j.at("controller");
        reject_unknown_keys(c, "controller",
                            {"scales", "integral_clamp", "static_importance",
                             "regulation_coeff", "sifie", "pfie", "pfie_theta_ref"});
        if (c.contains("scales")) {
            const json& sc = c.at("scales");
            reject_unknown_keys(sc, "controller.scales",
                                {"integral", "theta", "theta_dot"});
            cfg.sim.controller.input_scales[0] =
                get_number(sc, "controller.scales", "integral",
                           cfg.sim.controller.input_scales[0]);
            cfg.sim.controller.input_scales[1] =
                get_number(sc, "controller.scales", "theta",
                           cfg.sim.controller.input_scales[1]);
            cfg.sim.controller.input_scales[2] =
                get_number(sc, "controller.scales", "theta_dot",
                           cfg.sim.controller.input_scales[2]);
        }
        cfg.sim.controller.integral_clamp = get_number(
            c, "controller", "integral_clamp", cfg.sim.controller.integral_clamp);
        cfg.sim.controller.static_importance =
            get_array<3>(c, "controller", "static_importance",
                         cfg.sim.controller.static_importance);
        cfg.sim.controller.regulation_coeff =
            get_array<3>(c, "controller", "regulation_coeff",
                         cfg.sim.controller.regulation_coeff);
        if (c.contains("pfie_theta_ref")) {
            double ref = get_number(c, "controller", "pfie_theta_ref", 0.0);
            if (!(ref > 0.0))
                throw ConfigError("controller.pfie_theta_ref: must be > 0");
            cfg.sim.controller.pfie = default_pfie(ref);
        }
        if (c.contains("sifie")) {
            MembershipTriple m = detail::parse_membership(
                c.at("sifie"), "controller.sifie",
                cfg.sim.controller.sifie[0].memberships);
            for (int i = 0; i < 3; ++i)
                cfg.sim.controller.sifie[i].memberships = m;
        }
        if (c.contains("pfie"))
            cfg.sim.controller.pfie.memberships = detail::parse_membership(
                c.at("pfie"), "controller.pfie",
                cfg.sim.controller.pfie.memberships);
    }

    // gains (simulate literal)
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        reject_unknown_keys(g, "gains", {"base", "regulation"});
        cfg.gains.base = get_array<3>(g, "gains", "base", cfg.gains.base);
        cfg.gains.regulation =
            get_array<3>(g, "gains", "regulation", cfg.gains.regulation);
    }

    // ga
    if (j.contains("ga")) {
        const json& g = j.at("ga");
        reject_unknown_keys(g, "ga",
                            {"population_size", "crossover_fraction",
                             "subpopulations", "migration_fraction",
                             "migration_interval", "migration_direction",
                             "max_generations", "fitness_limit", "elite_count",
                             "tournament_size", "crossover_ratio",
                             "mutation_sigma", "seed", "bounds", "log_hv_ref"});
        cfg.ga.ps = get_int(g, "ga", "population_size", cfg.ga.ps);
        cfg.ga.cf = get_number(g, "ga", "crossover_fraction", cfg.ga.cf);
        cfg.ga.n_subpops = get_int(g, "ga", "subpopulations", cfg.ga.n_subpops);
        cfg.ga.migration_fraction = get_number(g, "ga", "migration_fraction",
                                               cfg.ga.migration_fraction);
        cfg.ga.migration_interval =
            get_int(g, "ga", "migration_interval", cfg.ga.migration_interval);
        if (g.contains("migration_direction")) {
            if (!g.at("migration_direction").is_string() ||
                g.at("migration_direction").get<std::string>() != "forward")
                throw ConfigError("ga.migration_direction: only \"forward\" is supported");
        }
        cfg.ga.max_generations =
            get_int(g, "ga", "max_generations", cfg.ga.max_generations);
        cfg.ga.fitness_limit =
            get_number(g, "ga", "fitness_limit", cfg.ga.fitness_limit);
        cfg.ga.elite_count = get_int(g, "ga", "elite_count", cfg.ga.elite_count);
        cfg.ga.tournament_size =
            get_int(g, "ga", "tournament_size", cfg.ga.tournament_size);
        cfg.ga.crossover_ratio =
            get_number(g, "ga", "crossover_ratio", cfg.ga.crossover_ratio);
        cfg.ga.mutation_sigma =
            get_number(g, "ga", "mutation_sigma", cfg.ga.mutation_sigma);
        if (g.contains("seed")) {
            if (!g.at("seed").is_number_unsigned() && !g.at("seed").is_number_integer())
                throw ConfigError("ga.seed: must be a non-negative integer");
            cfg.ga.rng_seed = g.at("seed").get<uint64_t>();
        }
        if (g.contains("bounds")) {
            const json& b = g.at("bounds");
            reject_unknown_keys(b, "ga.bounds", {"lo", "hi"});
            double lo = get_number(b, "ga.bounds", "lo", -5.0);
            double hi = get_number(b, "ga.bounds", "hi", 5.0);
            if (!(lo < hi))
                throw ConfigError("ga.bounds.lo: must be < ga.bounds.hi");
            cfg.ga.bounds.assign(6, GeneBounds{lo, hi});
        }
        if (g.contains("log_hv_ref")) {
            auto r = get_array<2>(g, "ga", "log_hv_ref",
                                  {cfg.ga.log_hv_ref.of1, cfg.ga.log_hv_ref.of2});
            cfg.ga.log_hv_ref = ObjectivePair{r[0], r[1]};
        }
    }

    // sweep
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown_keys(s, "sweep",
                            {"ps_values", "cf_values", "seeds_per_cell"});
        if (s.contains("ps_values")) {
            if (!s.at("ps_values").is_array() || s.at("ps_values").empty())
                throw ConfigError("sweep.ps_values: must be a non-empty array");
            cfg.sweep_ps_values = s.at("ps_values").get<std::vector<int>>();
        }
        if (s.contains("cf_values")) {
            if (!s.at("cf_values").is_array() || s.at("cf_values").empty())
                throw ConfigError("sweep.cf_values: must be a non-empty array");
            cfg.sweep_cf_values = s.at("cf_values").get<std::vector<double>>();
        }
        cfg.sweep_seeds_per_cell =
            get_int(s, "sweep", "seeds_per_cell", cfg.sweep_seeds_per_cell);
        if (cfg.sweep_seeds_per_cell < 1)
            throw ConfigError("sweep.seeds_per_cell: must be >= 1");
    }

    // plots
    if (j.contains("plots")) {
        const json& p = j.at("plots");
        reject_unknown_keys(p, "plots", {"trajectory", "pareto", "matrix"});
        cfg.plots.trajectory = get_bool(p, "plots", "trajectory", cfg.plots.trajectory);
        cfg.plots.pareto = get_bool(p, "plots", "pareto", cfg.plots.pareto);
        cfg.plots.matrix = get_bool(p, "plots", "matrix", cfg.plots.matrix);
    }

    // No run starts on a half-valid config.
    try {
        cfg.sim.validate();
        cfg.ga.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

// Parses config text, converting JSON syntax errors to line-anchored messages.
inline RunConfig parse_run_config_text(const std::string& text,
                                       const std::string& origin = "config") {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
            if (text[i] == '\n')
                ++line;
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + e.what());
    }
    return parse_run_config(j);
}

inline RunConfig load_run_config(const std::string& path) {
    return parse_run_config_text(read_text_file(path), path);
}

} // namespace tvc
