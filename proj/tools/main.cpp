#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "msqg/contour.hpp"
#include "msqg/curvekit.hpp"
#include "msqg/evolve.hpp"
#include "msqg/lembench.hpp"
#include "msqg/metrics.hpp"
#include "msqg/snapshot.hpp"

#include "artifacts.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using namespace msqg;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

cli::RunConfig load_config(const std::string& path, const std::string& out_override) {
    cli::RunConfig config =
        cli::parse_run_config(read_file(path), fs::path(path).parent_path().string());
    if (!out_override.empty()) config.output.dir = out_override;
    return config;
}

// The engine is sequential; the variable is accepted for interface stability
// and validated, nothing more.
void check_thread_env() {
    const char* value = std::getenv("MSQG_THREADS");
    if (value == nullptr) return;
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (end == value || *end != '\0' || n < 1)
        throw validation_error(std::string("MSQG_THREADS must be a positive integer, got \"") +
                               value + "\"");
}

std::string frame_name(const char* stem, int index, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06d.%s", stem, index, ext);
    return buf;
}

RunResult simulate_run(const cli::RunConfig& config, bool refine_core) {
    const ContourState initial = cli::build_initial_state(config);
    const PatchFamily family = cli::build_family(config);
    EvolveConfig evolve = config.evolve;
    evolve.cadence = config.output.cadence;
    evolve.rhs_options.refine_core = refine_core;
    if (config.dt_auto) evolve.dt = 0.0;
    return run(initial, family, config.alpha, config.regularization, evolve);
}

int write_run_artifacts(const std::string& command, const cli::RunConfig& config,
                        const RunResult& result) {
    const fs::path dir(config.output.dir);
    fs::create_directories(dir);
    const int exit_code = result.verdict.kind == BlowupKind::None ? 0 : 2;
    cli::write_file((dir / "diagnostics.csv").string(),
                    cli::diagnostics_csv(result.diagnostics,
                                         static_cast<int>(config.patches.size())));
    const PatchFamily family = cli::build_family(config);
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        cli::write_file((dir / frame_name("snapshot", static_cast<int>(i), "json")).string(),
                        state_to_json(result.snapshots[i]));
        if (config.output.emit_svg)
            cli::write_file((dir / frame_name("frame", static_cast<int>(i), "svg")).string(),
                            cli::frame_svg(result.snapshots[i], family, result.snapshots));
    }
    cli::write_file((dir / "summary.json").string(),
                    cli::summary_json(command, config, result,
                                      static_cast<int>(result.snapshots.size()), exit_code));
    std::cout << "verdict: " << to_string(result.verdict.kind) << " at t = "
              << result.verdict.time << "\n"
              << "wrote " << dir.string() << "/ (" << result.snapshots.size()
              << " snapshots, " << result.diagnostics.size() << " diagnostics rows)\n";
    return exit_code;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 bool refine_core) {
    const cli::RunConfig config = load_config(config_path, out_override);
    const RunResult result = simulate_run(config, refine_core);
    return write_run_artifacts("simulate", config, result);
}

int cmd_converge(const std::string& kind_name, const std::string& config_path,
                 const std::string& out_override) {
    const cli::RunConfig config = load_config(config_path, out_override);
    if (config.converge_values.size() < 3)
        throw validation_error("converge needs at least 3 values in $.converge.values");

    SweepKind kind;
    if (kind_name == "beta")
        kind = SweepKind::BetaSweep;
    else if (kind_name == "epsilon")
        kind = SweepKind::EpsilonSweep;
    else if (kind_name == "grid")
        kind = SweepKind::GridRefine;
    else if (kind_name == "hausdorff")
        kind = SweepKind::SplitStepHausdorff;
    else
        throw validation_error("unknown sweep \"" + kind_name +
                               "\" (expected beta, epsilon, grid, or hausdorff)");

    StudyConfig study;
    study.initial = cli::build_initial_state(config);
    study.family = cli::build_family(config);
    study.alpha = config.alpha;
    study.evolve = config.evolve;
    study.evolve.cadence = 0.0; // endpoints are all the sweep compares
    if (config.dt_auto) study.evolve.dt = 0.0;
    study.parameters = config.converge_values;
    if (config.regularization.kind == RegularizationSpec::Kind::Mollified)
        study.mollified_template = config.regularization;
    if (kind == SweepKind::GridRefine) {
        for (double v : config.converge_values)
            check_grid_size(static_cast<int>(v));
        cli::RunConfig per_grid = config;
        study.initial_for_grid = [per_grid](int grid_size) {
            cli::RunConfig c = per_grid;
            c.grid_size = grid_size;
            return cli::build_initial_state(c);
        };
    }
    if (kind == SweepKind::SplitStepHausdorff && config.dt_auto)
        throw validation_error("hausdorff sweep needs a numeric $.evolve.dt");

    const ConvergenceTable table = convergence_study(kind, study);

    const fs::path dir(config.output.dir);
    fs::create_directories(dir);
    cli::write_file((dir / "convergence.csv").string(), cli::convergence_csv(table));
    cli::write_file((dir / "convergence.json").string(), cli::convergence_json(table));
    std::cout << "sweep " << kind_name << ": fitted slope " << table.fitted_slope
              << " (target " << table.target_slope << ", " << table.excluded.size()
              << " excluded)\nwrote " << dir.string() << "/\n";
    return 0;
}

int cmd_trace(const std::string& config_path, const std::string& out_override, bool oracle) {
    const cli::RunConfig config = load_config(config_path, out_override);
    if (config.trace.seeds.empty())
        throw validation_error("trace needs at least one seed in $.trace.seeds");
    const RunResult result = simulate_run(config, false);

    TracerOptions options;
    options.substeps_per_interval = config.trace.substeps;
    options.jacobian = config.trace.jacobian;
    options.use_oracle = oracle;
    const PatchFamily family = cli::build_family(config);
    const std::vector<TracerPath> paths =
        advect_tracers(config.trace.seeds, result.snapshots, family, config.alpha, options);

    const int exit_code = write_run_artifacts("trace", config, result);
    cli::write_file((fs::path(config.output.dir) / "tracers.csv").string(),
                    cli::tracers_csv(paths));
    return exit_code;
}

int cmd_bench(std::uint32_t seed, int fields, int grid, const std::string& out_dir) {
    const BenchReport report = run_bench(seed, fields, grid);
    fs::create_directories(out_dir);
    cli::write_file((fs::path(out_dir) / "bench.json").string(),
                    bench_report_json(report));
    for (const BenchReport::Entry& entry : report.entries)
        std::cout << entry.check << ": max ratio " << entry.max_ratio << " (field "
                  << entry.argmax_index << ")\n";
    std::cout << "wrote " << out_dir << "/bench.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contour dynamics for generalized surface-quasigeostrophic patches"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sweep_kind;
    bool refine_core = false, oracle = false;
    std::uint32_t bench_seed = 20240801u;
    int bench_fields = 100, bench_grid = 256;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Integrate a patch configuration and write diagnostics");
    simulate->add_option("--config", config_path, "run configuration (JSON)")->required();
    simulate->add_option("--out", out_dir, "override output.dir");
    simulate->add_flag("--refine-core", refine_core,
                       "graded quadrature around the vanishing kernel core");

    CLI::App* converge = app.add_subcommand(
        "converge", "Parameter sweep with a fitted convergence slope");
    converge->add_option("kind", sweep_kind, "beta | epsilon | grid | hausdorff")->required();
    converge->add_option("--config", config_path, "run configuration (JSON)")->required();
    converge->add_option("--out", out_dir, "override output.dir");

    CLI::App* trace = app.add_subcommand(
        "trace", "Advect tracer points through a simulated flow");
    trace->add_option("--config", config_path, "run configuration (JSON)")->required();
    trace->add_option("--out", out_dir, "override output.dir");
    trace->add_flag("--oracle", oracle, "area-quadrature velocity instead of the boundary form");

    CLI::App* bench = app.add_subcommand(
        "bench", "Inequality checks over a random scalar-field corpus");
    bench->add_option("--seed", bench_seed, "corpus seed");
    bench->add_option("--fields", bench_fields, "corpus size")
        ->check(CLI::PositiveNumber);
    bench->add_option("--grid", bench_grid, "grid size (power of two >= 64)");
    bench->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        check_thread_env();
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir, refine_core);
        if (converge->parsed()) return cmd_converge(sweep_kind, config_path, out_dir);
        if (trace->parsed()) return cmd_trace(config_path, out_dir, oracle);
        if (bench->parsed())
            return cmd_bench(bench_seed, bench_fields, bench_grid,
                             out_dir.empty() ? "out" : out_dir);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
