#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tvcmoga/errors.hpp"
#include "tvcmoga/moga.hpp"
#include "tvcmoga/simulation.hpp"
#include "tvcmoga/sweep.hpp"

namespace tvc {

// Artifact serialization. Every float is written with 17 significant digits
// (CSV) or shortest-round-trip (JSON), so artifacts reload losslessly and
// identical runs emit identical bytes. No timestamps, no environment.

using json = nlohmann::json;

inline std::string fmt_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x,
                             std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{})
        throw InvalidInput("not a number: '" + s + "'");
    return x;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot open for writing: " + path);
    out << text;
    if (!out)
        throw InvalidInput("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

// ---------------------------------------------------------------- trajectory

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,theta,theta_dot,phi,u_t,delta_w,K_i,K_p,K_d\n";
    for (const TrajectorySample& s : traj.samples) {
        out += fmt_double(s.t) + ',' + fmt_double(s.theta) + ',' +
               fmt_double(s.theta_dot) + ',' + fmt_double(s.phi) + ',' +
               fmt_double(s.u_t) + ',' + fmt_double(s.delta_w) + ',' +
               fmt_double(s.gains[0]) + ',' + fmt_double(s.gains[1]) + ',' +
               fmt_double(s.gains[2]) + '\n';
    }
    return out;
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    write_text_file(path, trajectory_csv(traj));
}

inline Trajectory read_trajectory_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) ||
        line != "t,theta,theta_dot,phi,u_t,delta_w,K_i,K_p,K_d")
        throw InvalidInput(path + ": not a trajectory CSV (bad header)");
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 9)
            throw InvalidInput(path + ": expected 9 columns");
        TrajectorySample s;
        s.t = parse_double(f[0]);
        s.theta = parse_double(f[1]);
        s.theta_dot = parse_double(f[2]);
        s.phi = parse_double(f[3]);
        s.u_t = parse_double(f[4]);
        s.delta_w = parse_double(f[5]);
        s.gains = {parse_double(f[6]), parse_double(f[7]), parse_double(f[8])};
        traj.samples.push_back(s);
    }
    return traj;
}

// ------------------------------------------------------------ generation log

inline std::string generation_log_csv(const std::vector<GenerationStats>& log) {
    std::string out =
        "generation,best_of1,best_of2,mean_of1,mean_of2,hypervolume,front_size\n";
    for (const GenerationStats& g : log) {
        out += std::to_string(g.generation) + ',' + fmt_double(g.best_of1) + ',' +
               fmt_double(g.best_of2) + ',' + fmt_double(g.mean_of1) + ',' +
               fmt_double(g.mean_of2) + ',' + fmt_double(g.hypervolume) + ',' +
               std::to_string(g.front_size) + '\n';
    }
    return out;
}

inline void write_generation_log_csv(const std::string& path,
                                     const std::vector<GenerationStats>& log) {
    write_text_file(path, generation_log_csv(log));
}

inline std::vector<GenerationStats>
read_generation_log_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) ||
        line != "generation,best_of1,best_of2,mean_of1,mean_of2,hypervolume,front_size")
        throw InvalidInput(path + ": not a generation-log CSV (bad header)");
    std::vector<GenerationStats> log;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 7)
            throw InvalidInput(path + ": expected 7 columns");
        GenerationStats g;
        g.generation = static_cast<int>(parse_double(f[0]));
        g.best_of1 = parse_double(f[1]);
        g.best_of2 = parse_double(f[2]);
        g.mean_of1 = parse_double(f[3]);
        g.mean_of2 = parse_double(f[4]);
        g.hypervolume = parse_double(f[5]);
        g.front_size = static_cast<int>(parse_double(f[6]));
        log.push_back(g);
    }
    return log;
}

// ----------------------------------------------------------------- JSON bits

inline json to_json(const Individual& ind) {
    json j;
    j["genes"] = ind.genome.genes;
    j["of1"] = ind.objectives.of1;
    j["of2"] = ind.objectives.of2;
    j["rank"] = ind.rank;
    j["crowding"] = std::isfinite(ind.crowding) ? json(ind.crowding) : json("inf");
    return j;
}

inline Individual individual_from_json(const json& j,
                                       const std::vector<GeneBounds>& bounds) {
    Individual ind;
    ind.genome.genes = j.at("genes").get<std::vector<double>>();
    ind.genome.bounds = bounds;
    ind.objectives.of1 = j.at("of1").get<double>();
    ind.objectives.of2 = j.at("of2").get<double>();
    ind.rank = j.at("rank").get<int>();
    ind.crowding = j.at("crowding").is_string()
                       ? std::numeric_limits<double>::infinity()
                       : j.at("crowding").get<double>();
    ind.evaluated = true;
    return ind;
}

inline json to_json(const GaConfig& cfg) {
    json j;
    j["population_size"] = cfg.ps;
    j["crossover_fraction"] = cfg.cf;
    j["subpopulations"] = cfg.n_subpops;
    j["migration_fraction"] = cfg.migration_fraction;
    j["migration_interval"] = cfg.migration_interval;
    j["migration_direction"] = "forward";
    j["max_generations"] = cfg.max_generations;
    j["fitness_limit"] = cfg.fitness_limit;
    j["elite_count"] = cfg.elite_count;
    j["tournament_size"] = cfg.tournament_size;
    j["crossover_ratio"] = cfg.crossover_ratio;
    j["mutation_sigma"] = cfg.mutation_sigma;
    j["seed"] = cfg.rng_seed;
    json lo = json::array(), hi = json::array();
    for (const GeneBounds& b : cfg.bounds) {
        lo.push_back(b.lo);
        hi.push_back(b.hi);
    }
    j["bounds_lo"] = lo;
    j["bounds_hi"] = hi;
    j["log_hv_ref"] = {cfg.log_hv_ref.of1, cfg.log_hv_ref.of2};
    return j;
}

inline GaConfig ga_config_from_json(const json& j) {
    GaConfig cfg;
    cfg.ps = j.at("population_size").get<int>();
    cfg.cf = j.at("crossover_fraction").get<double>();
    cfg.n_subpops = j.at("subpopulations").get<int>();
    cfg.migration_fraction = j.at("migration_fraction").get<double>();
    cfg.migration_interval = j.at("migration_interval").get<int>();
    cfg.max_generations = j.at("max_generations").get<int>();
    cfg.fitness_limit = j.at("fitness_limit").get<double>();
    cfg.elite_count = j.at("elite_count").get<int>();
    cfg.tournament_size = j.at("tournament_size").get<int>();
    cfg.crossover_ratio = j.at("crossover_ratio").get<double>();
    cfg.mutation_sigma = j.at("mutation_sigma").get<double>();
    cfg.rng_seed = j.at("seed").get<uint64_t>();
    std::vector<double> lo = j.at("bounds_lo").get<std::vector<double>>();
    std::vector<double> hi = j.at("bounds_hi").get<std::vector<double>>();
    if (lo.size() != hi.size())
        throw InvalidInput("ga config: bounds_lo/bounds_hi size mismatch");
    cfg.bounds.clear();
    for (size_t i = 0; i < lo.size(); ++i)
        cfg.bounds.push_back(GeneBounds{lo[i], hi[i]});
    std::vector<double> ref = j.at("log_hv_ref").get<std::vector<double>>();
    if (ref.size() != 2)
        throw InvalidInput("ga config: log_hv_ref must have 2 entries");
    cfg.log_hv_ref = ObjectivePair{ref[0], ref[1]};
    return cfg;
}

// ----------------------------------------------------------------- front JSON

inline json front_to_json(const ParetoFront& front, const CasePoints& points,
                          const GaConfig& ga) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "pareto_front";
    j["ga"] = to_json(ga);
    j["seed"] = ga.rng_seed;
    json members = json::array();
    for (const Individual& m : front.members)
        members.push_back(to_json(m));
    j["members"] = members;
    j["points"]["A"] = to_json(points.a);
    j["points"]["B"] = to_json(points.b);
    j["points"]["C"] = to_json(points.c);
    return j;
}

struct FrontDocument {
    ParetoFront front;
    CasePoints points;
    GaConfig ga;
};

inline FrontDocument front_from_json(const json& j) {
    if (j.value("kind", "") != "pareto_front")
        throw InvalidInput("expected a pareto_front document");
    FrontDocument doc;
    doc.ga = ga_config_from_json(j.at("ga"));
    for (const json& m : j.at("members"))
        doc.front.members.push_back(individual_from_json(m, doc.ga.bounds));
    doc.points.a = individual_from_json(j.at("points").at("A"), doc.ga.bounds);
    doc.points.b = individual_from_json(j.at("points").at("B"), doc.ga.bounds);
    doc.points.c = individual_from_json(j.at("points").at("C"), doc.ga.bounds);
    return doc;
}

inline void write_front_json(const std::string& path, const ParetoFront& front,
                             const CasePoints& points, const GaConfig& ga) {
    write_text_file(path, front_to_json(front, points, ga).dump(2) + "\n");
}

inline FrontDocument read_front_json(const std::string& path) {
    return front_from_json(json::parse(read_text_file(path)));
}

// ---------------------------------------------------------------- sweep JSON

inline json summary_matrix_to_json(const SummaryMatrix& m) {
    json j;
    j["values"] = m.values;
    j["argmin"] = {m.argmin_ps_index, m.argmin_cf_index};
    j["tie"] = m.tie;
    return j;
}

inline SummaryMatrix summary_matrix_from_json(const json& j) {
    SummaryMatrix m;
    m.values = j.at("values").get<std::vector<std::vector<double>>>();
    m.argmin_ps_index = j.at("argmin")[0].get<int>();
    m.argmin_cf_index = j.at("argmin")[1].get<int>();
    m.tie = j.at("tie").get<bool>();
    return m;
}

inline json sweep_report_to_json(const SweepReport& report) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "sweep_report";
    j["ps_values"] = report.ps_values;
    j["cf_values"] = report.cf_values;
    j["seeds_per_cell"] = report.seeds_per_cell;
    j["base_seed"] = report.base_seed;
    j["hv_ref"] = {report.hv_ref.of1, report.hv_ref.of2};
    json cells = json::array();
    for (const SweepCell& cell : report.cells) {
        json c;
        c["ps"] = cell.ps;
        c["cf"] = cell.cf;
        c["seed"] = cell.seed;
        c["seed_index"] = cell.seed_index;
        if (!cell.error.empty()) {
            c["error"] = cell.error;
        } else {
            json members = json::array();
            for (const Individual& m : cell.front.members)
                members.push_back(to_json(m));
            c["front"] = members;
            c["points"]["A"] = to_json(cell.points.a);
            c["points"]["B"] = to_json(cell.points.b);
            c["points"]["C"] = to_json(cell.points.c);
            c["hypervolume"] = cell.hypervolume;
            c["hv_excluded"] = cell.hv_excluded;
        }
        cells.push_back(c);
    }
    j["cells"] = cells;
    j["summaries"]["A"]["of1"] = summary_matrix_to_json(report.summaries.a_of1);
    j["summaries"]["A"]["of2"] = summary_matrix_to_json(report.summaries.a_of2);
    j["summaries"]["B"]["of1"] = summary_matrix_to_json(report.summaries.b_of1);
    j["summaries"]["B"]["of2"] = summary_matrix_to_json(report.summaries.b_of2);
    j["summaries"]["C"]["of1"] = summary_matrix_to_json(report.summaries.c_of1);
    j["summaries"]["C"]["of2"] = summary_matrix_to_json(report.summaries.c_of2);
    return j;
}

inline SweepReport sweep_report_from_json(const json& j,
                                          const std::vector<GeneBounds>& bounds) {
    if (j.value("kind", "") != "sweep_report")
        throw InvalidInput("expected a sweep_report document");
    SweepReport report;
    report.ps_values = j.at("ps_values").get<std::vector<int>>();
    report.cf_values = j.at("cf_values").get<std::vector<double>>();
    report.seeds_per_cell = j.at("seeds_per_cell").get<int>();
    report.base_seed = j.at("base_seed").get<uint64_t>();
    std::vector<double> ref = j.at("hv_ref").get<std::vector<double>>();
    report.hv_ref = ObjectivePair{ref.at(0), ref.at(1)};
    for (const json& c : j.at("cells")) {
        SweepCell cell;
        cell.ps = c.at("ps").get<int>();
        cell.cf = c.at("cf").get<double>();
        cell.seed = c.at("seed").get<uint64_t>();
        cell.seed_index = c.at("seed_index").get<int>();
        if (c.contains("error")) {
            cell.error = c.at("error").get<std::string>();
        } else {
            for (const json& m : c.at("front"))
                cell.front.members.push_back(individual_from_json(m, bounds));
            cell.points.a = individual_from_json(c.at("points").at("A"), bounds);
            cell.points.b = individual_from_json(c.at("points").at("B"), bounds);
            cell.points.c = individual_from_json(c.at("points").at("C"), bounds);
            cell.hypervolume = c.at("hypervolume").get<double>();
            cell.hv_excluded = c.at("hv_excluded").get<int>();
        }
        report.cells.push_back(std::move(cell));
    }
    const json& s = j.at("summaries");
    report.summaries.a_of1 = summary_matrix_from_json(s.at("A").at("of1"));
    report.summaries.a_of2 = summary_matrix_from_json(s.at("A").at("of2"));
    report.summaries.b_of1 = summary_matrix_from_json(s.at("B").at("of1"));
    report.summaries.b_of2 = summary_matrix_from_json(s.at("B").at("of2"));
    report.summaries.c_of1 = summary_matrix_from_json(s.at("C").at("of1"));
    report.summaries.c_of2 = summary_matrix_from_json(s.at("C").at("of2"));
    return report;
}

inline void write_sweep_report_json(const std::string& path,
                                    const SweepReport& report) {
    write_text_file(path, sweep_report_to_json(report).dump(2) + "\n");
}

inline SweepReport read_sweep_report_json(const std::string& path,
                                          const std::vector<GeneBounds>& bounds) {
    return sweep_report_from_json(json::parse(read_text_file(path)), bounds);
}

// ---------------------------------------------------------------- matrix CSV

inline std::string matrix_csv(const SummaryMatrix& m,
                              const std::vector<int>& ps_values,
                              const std::vector<double>& cf_values) {
    std::string out = "ps";
    for (double cf : cf_values)
        out += ",cf_" + fmt_double(cf);
    out += '\n';
    for (size_t pi = 0; pi < ps_values.size(); ++pi) {
        out += std::to_string(ps_values[pi]);
        for (size_t ci = 0; ci < cf_values.size(); ++ci)
            out += ',' + fmt_double(m.values[pi][ci]);
        out += '\n';
    }
    return out;
}

inline void write_matrix_csv(const std::string& path, const SummaryMatrix& m,
                             const std::vector<int>& ps_values,
                             const std::vector<double>& cf_values) {
    write_text_file(path, matrix_csv(m, ps_values, cf_values));
}

} // namespace tvc
