// tvc-moga: closed-loop pitch-channel simulation, multi-objective gain
// optimization, and the PS x CF sensitivity sweep, driven by one JSON config.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tvcmoga/config.hpp"
#include "tvcmoga/io.hpp"
#include "tvcmoga/svg.hpp"
#include "tvcmoga/tuning.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt6(double v) {
    return tvc::svg::short_num(v);
}

fs::path resolve_out_dir(const std::string& flag_out, const tvc::RunConfig& cfg) {
    std::string dir = flag_out;
    if (dir.empty())
        dir = cfg.output_dir;
    if (dir.empty()) {
        const char* env = std::getenv("TVC_MOGA_OUT");
        if (env && *env)
            dir = env;
    }
    if (dir.empty())
        dir = ".";
    fs::create_directories(dir);
    return fs::path(dir);
}

tvc::svg::Series trajectory_series(const tvc::Trajectory& traj,
                                   double tvc::TrajectorySample::* field,
                                   const std::string& name) {
    tvc::svg::Series s;
    s.name = name;
    for (const tvc::TrajectorySample& sample : traj.samples)
        s.points.emplace_back(sample.t, sample.*field);
    return s;
}

void write_trajectory_plots(const fs::path& out_dir, const tvc::Trajectory& traj) {
    tvc::write_text_file(
        (out_dir / "trajectory_theta.svg").string(),
        tvc::line_chart_svg("Pitch deviation response", "t [s]", "theta [rad]",
                            {trajectory_series(traj, &tvc::TrajectorySample::theta,
                                               "theta")}));
    tvc::write_text_file(
        (out_dir / "trajectory_phi.svg").string(),
        tvc::line_chart_svg("Thrust-vector angle response", "t [s]", "phi [rad]",
                            {trajectory_series(traj, &tvc::TrajectorySample::phi,
                                               "phi")}));
}

void print_points_table(const tvc::CasePoints& points) {
    auto row = [](const char* name, const tvc::Individual& ind) {
        std::cout << name << "  of1=" << fmt6(ind.objectives.of1)
                  << "  of2=" << fmt6(ind.objectives.of2) << "  genes=[";
        for (size_t i = 0; i < ind.genome.genes.size(); ++i)
            std::cout << (i ? ", " : "") << fmt6(ind.genome.genes[i]);
        std::cout << "]\n";
    };
    std::cout << "point  objectives  (K_i^b K_p^b K_d^b K_i^r K_p^r K_d^r)\n";
    row("A", points.a);
    row("B", points.b);
    row("C", points.c);
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 const std::string& front_path, const std::string& point_name,
                 std::optional<int> member_index) {
    tvc::RunConfig cfg = tvc::load_run_config(config_path);
    fs::path out_dir = resolve_out_dir(out_flag, cfg);

    tvc::GainSchedule gains = cfg.gains;
    if (!front_path.empty()) {
        tvc::FrontDocument doc = tvc::read_front_json(front_path);
        const tvc::Individual* chosen = nullptr;
        if (member_index) {
            if (*member_index < 0 ||
                static_cast<size_t>(*member_index) >= doc.front.members.size())
                throw tvc::InvalidInput("--member out of range for " + front_path);
            chosen = &doc.front.members[static_cast<size_t>(*member_index)];
        } else if (point_name == "A") {
            chosen = &doc.points.a;
        } else if (point_name == "B") {
            chosen = &doc.points.b;
        } else if (point_name == "C") {
            chosen = &doc.points.c;
        } else {
            throw tvc::InvalidInput("--point must be A, B or C");
        }
        gains = tvc::gain_schedule_from_genes(chosen->genome.genes);
    }

    tvc::Trajectory traj = tvc::rollout(gains, cfg.sim);
    tvc::write_trajectory_csv((out_dir / "trajectory.csv").string(), traj);
    if (cfg.plots.trajectory && !traj.samples.empty())
        write_trajectory_plots(out_dir, traj);

    if (traj.diverged) {
        std::cerr << "warning: trajectory diverged (|theta| > "
                  << fmt6(cfg.sim.divergence_limit) << " rad), truncated at t="
                  << fmt6(traj.samples.empty() ? 0.0 : traj.samples.back().t)
                  << " s\n";
    } else {
        tvc::ObjectivePair of = tvc::objectives(traj);
        std::cout << "of1=" << fmt6(of.of1) << " of2=" << fmt6(of.of2)
                  << " settling_time=" << fmt6(tvc::settling_time(traj))
                  << " overshoot=" << fmt6(tvc::overshoot(traj))
                  << " theta_end=" << fmt6(traj.samples.back().theta) << "\n";
    }
    std::cout << "wrote " << (out_dir / "trajectory.csv").string() << "\n";
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& out_flag,
                 std::optional<uint64_t> seed) {
    tvc::RunConfig cfg = tvc::load_run_config(config_path);
    if (seed)
        cfg.ga.rng_seed = *seed;
    fs::path out_dir = resolve_out_dir(out_flag, cfg);

    tvc::EvolveResult res =
        tvc::evolve(cfg.ga, tvc::make_controller_fitness(cfg.sim));
    if (res.front.members.empty())
        throw tvc::InvalidInput("optimizer returned an empty front");
    tvc::CasePoints points = tvc::extract_points(res.front);

    tvc::write_front_json((out_dir / "front.json").string(), res.front, points,
                          cfg.ga);
    tvc::write_generation_log_csv((out_dir / "generations.csv").string(), res.log);
    if (cfg.plots.pareto) {
        std::vector<std::pair<double, double>> pts;
        for (const tvc::Individual& m : res.front.members)
            pts.emplace_back(m.objectives.of1, m.objectives.of2);
        std::vector<tvc::svg::Marker> markers{
            {"A", points.a.objectives.of1, points.a.objectives.of2},
            {"B", points.b.objectives.of1, points.b.objectives.of2},
            {"C", points.c.objectives.of1, points.c.objectives.of2}};
        tvc::write_text_file((out_dir / "pareto.svg").string(),
                             tvc::pareto_svg("Pareto front", pts, markers));
    }
    print_points_table(points);
    std::cout << "front_size=" << res.front.members.size()
              << " generations=" << res.log.size() << "\n";
    std::cout << "wrote " << (out_dir / "front.json").string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag,
              unsigned jobs, std::optional<uint64_t> seed) {
    tvc::RunConfig cfg = tvc::load_run_config(config_path);
    if (seed)
        cfg.ga.rng_seed = *seed;
    fs::path out_dir = resolve_out_dir(out_flag, cfg);

    tvc::SweepGrid grid = cfg.sweep_grid();
    tvc::FitnessFn fitness = tvc::make_controller_fitness(grid.sim);
    tvc::SweepReport report = tvc::run_grid(
        grid, [&](const tvc::SweepCell&) { return fitness; }, jobs);

    tvc::write_sweep_report_json((out_dir / "sweep_report.json").string(), report);

    struct MatrixRef {
        const char* point;
        const char* objective;
        const tvc::SummaryMatrix* matrix;
    };
    const MatrixRef matrices[] = {
        {"A", "of1", &report.summaries.a_of1}, {"A", "of2", &report.summaries.a_of2},
        {"B", "of1", &report.summaries.b_of1}, {"B", "of2", &report.summaries.b_of2},
        {"C", "of1", &report.summaries.c_of1}, {"C", "of2", &report.summaries.c_of2},
    };
    for (const MatrixRef& m : matrices) {
        std::string stem = std::string("summary_") + m.point + "_" + m.objective;
        tvc::write_matrix_csv((out_dir / (stem + ".csv")).string(), *m.matrix,
                              report.ps_values, report.cf_values);
        if (cfg.plots.matrix)
            tvc::write_text_file(
                (out_dir / (stem + ".svg")).string(),
                tvc::matrix_bar_svg(std::string(m.point) + " points: " +
                                        m.objective + " vs GA parameters",
                                    m.matrix->values, report.ps_values,
                                    report.cf_values,
                                    std::string(m.objective) + " [rad s]"));
    }

    int failed = 0;
    for (const tvc::SweepCell& cell : report.cells)
        if (!cell.error.empty()) {
            ++failed;
            std::cerr << "cell ps=" << cell.ps << " cf=" << fmt6(cell.cf)
                      << " seed=" << cell.seed << " failed: " << cell.error << "\n";
        }
    for (const MatrixRef& m : matrices) {
        std::cout << m.point << "/" << m.objective
                  << ": best ps=" << report.ps_values[static_cast<size_t>(
                                        m.matrix->argmin_ps_index)]
                  << " cf=" << fmt6(report.cf_values[static_cast<size_t>(
                                 m.matrix->argmin_cf_index)])
                  << " value="
                  << fmt6(m.matrix->values[static_cast<size_t>(m.matrix->argmin_ps_index)]
                                          [static_cast<size_t>(m.matrix->argmin_cf_index)])
                  << (m.matrix->tie ? " (tie)" : "") << "\n";
    }
    std::cout << "cells=" << report.cells.size() << " failed=" << failed << "\n";
    std::cout << "wrote " << (out_dir / "sweep_report.json").string() << "\n";
    return failed == static_cast<int>(report.cells.size()) && failed > 0 ? 1 : 0;
}

int cmd_plot(const std::string& kind, const std::string& input,
             const std::string& output, const std::string& point_name,
             const std::string& objective) {
    if (kind == "trajectory" || kind == "thrust-angle") {
        tvc::Trajectory traj = tvc::read_trajectory_csv(input);
        if (traj.samples.empty())
            throw tvc::InvalidInput(input + ": empty trajectory");
        if (kind == "trajectory")
            tvc::write_text_file(
                output, tvc::line_chart_svg(
                            "Pitch deviation response", "t [s]", "theta [rad]",
                            {trajectory_series(traj, &tvc::TrajectorySample::theta,
                                               "theta")}));
        else
            tvc::write_text_file(
                output, tvc::line_chart_svg(
                            "Thrust-vector angle response", "t [s]", "phi [rad]",
                            {trajectory_series(traj, &tvc::TrajectorySample::phi,
                                               "phi")}));
    } else if (kind == "pareto") {
        tvc::FrontDocument doc = tvc::read_front_json(input);
        std::vector<std::pair<double, double>> pts;
        for (const tvc::Individual& m : doc.front.members)
            pts.emplace_back(m.objectives.of1, m.objectives.of2);
        std::vector<tvc::svg::Marker> markers{
            {"A", doc.points.a.objectives.of1, doc.points.a.objectives.of2},
            {"B", doc.points.b.objectives.of1, doc.points.b.objectives.of2},
            {"C", doc.points.c.objectives.of1, doc.points.c.objectives.of2}};
        tvc::write_text_file(output, tvc::pareto_svg("Pareto front", pts, markers));
    } else if (kind == "matrix-bar") {
        tvc::SweepReport report = tvc::read_sweep_report_json(
            input, std::vector<tvc::GeneBounds>(6, tvc::GeneBounds{-5.0, 5.0}));
        const tvc::SummaryMatrix* m = nullptr;
        if (point_name == "A")
            m = objective == "of2" ? &report.summaries.a_of2 : &report.summaries.a_of1;
        else if (point_name == "B")
            m = objective == "of2" ? &report.summaries.b_of2 : &report.summaries.b_of1;
        else if (point_name == "C")
            m = objective == "of2" ? &report.summaries.c_of2 : &report.summaries.c_of1;
        else
            throw tvc::InvalidInput("--point must be A, B or C");
        if (objective != "of1" && objective != "of2")
            throw tvc::InvalidInput("--objective must be of1 or of2");
        tvc::write_text_file(
            output, tvc::matrix_bar_svg(point_name + " points: " + objective +
                                            " vs GA parameters",
                                        m->values, report.ps_values,
                                        report.cf_values, objective + " [rad s]"));
    } else {
        throw tvc::InvalidInput(
            "--kind must be trajectory, thrust-angle, pareto or matrix-bar");
    }
    std::cout << "wrote " << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CanSat carrier pitch-channel fuzzy-PID tuning toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, front_path, point_name = "A";
    std::string plot_kind, plot_input, plot_output, plot_objective = "of1";
    std::optional<int> member_index;
    std::optional<uint64_t> seed;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    CLI::App* simulate = app.add_subcommand("simulate", "roll out one gain set");
    simulate->add_option("--config", config_path, "run-config JSON")->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--front", front_path, "take gains from this front JSON");
    simulate->add_option("--point", point_name, "front point to simulate (A|B|C)");
    simulate->add_option("--member", member_index, "front member index instead of --point");

    CLI::App* optimize = app.add_subcommand("optimize", "run the gain optimizer once");
    optimize->add_option("--config", config_path, "run-config JSON")->required();
    optimize->add_option("--out", out_dir, "output directory");
    optimize->add_option("--seed", seed, "override ga.seed");

    CLI::App* sweep = app.add_subcommand("sweep", "run the PS x CF sensitivity grid");
    sweep->add_option("--config", config_path, "run-config JSON")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "parallel sweep cells");
    sweep->add_option("--seed", seed, "override ga.seed (replicate base)");

    CLI::App* plot = app.add_subcommand("plot", "render an artifact to SVG");
    plot->add_option("--kind", plot_kind,
                     "trajectory|thrust-angle|pareto|matrix-bar")->required();
    plot->add_option("--input", plot_input, "artifact path")->required();
    plot->add_option("--output", plot_output, "SVG path")->required();
    plot->add_option("--point", point_name, "matrix-bar point type (A|B|C)");
    plot->add_option("--objective", plot_objective, "matrix-bar objective (of1|of2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(config_path, out_dir, front_path, point_name,
                                member_index);
        if (optimize->parsed())
            return cmd_optimize(config_path, out_dir, seed);
        if (sweep->parsed())
            return cmd_sweep(config_path, out_dir, jobs, seed);
        if (plot->parsed())
            return cmd_plot(plot_kind, plot_input, plot_output, point_name,
                            plot_objective);
    } catch (const tvc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
