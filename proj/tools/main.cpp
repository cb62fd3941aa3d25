// Batch front-end: mesh -> probe -> indicate -> sweep -> reconstruct -> validate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "enclosure/config.hpp"
#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"
#include "enclosure/report.hpp"
#include "enclosure/validate.hpp"

namespace fs = std::filesystem;
using namespace enclosure;

namespace {

struct CliOverrides {
    std::string configPath;
    std::string outDir;
    bool plot = false;
    int jobs = -1;
    std::int64_t seed = -1;
    double noise = -1.0;
};

RunConfig load_config(const CliOverrides& cli) {
    RunConfig cfg = parse_config(cli.configPath);
    if (!cli.outDir.empty()) cfg.outputDir = cli.outDir;
    if (cli.plot) cfg.plot = true;
    if (cli.jobs >= 0) cfg.jobs = cli.jobs;
    if (cli.seed >= 0) cfg.seed = std::uint64_t(cli.seed);
    if (cli.noise >= 0.0) cfg.noiseLevel = cli.noise;
    return cfg;
}

void prepare_output(const RunConfig& cfg) {
    fs::create_directories(cfg.outputDir);
    write_text_file((fs::path(cfg.outputDir) / "resolved_config").string(), emit_config(cfg));
}

int effective_jobs(const RunConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

ProbeParams base_params(const RunConfig& cfg) {
    ProbeParams p;
    p.d = cfg.dMax;
    p.h = cfg.hGrid.front();
    p.epsBand = cfg.epsBand;
    p.quadOrder = cfg.quadOrder;
    p.angularGuard = cfg.angularGuard;
    return p;
}

int cmd_mesh(const RunConfig& cfg) {
    const Mesh mesh =
        generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
    write_mesh_file(mesh, (fs::path(cfg.outputDir) / "mesh.txt").string());
    std::cout << "mesh: " << mesh.node_count() << " nodes, " << mesh.triangle_count()
              << " triangles, " << mesh.boundaryNodes.size() << " boundary nodes\n";
    for (const std::string& w : mesh.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int cmd_probe(const RunConfig& cfg) {
    const Mesh mesh =
        generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
    const WaveNumbers waves = WaveNumbers::from_material(cfg.material);
    std::ofstream os(fs::path(cfg.outputDir) / "probe_trace.csv");
    bool header = true;
    for (std::size_t c = 0; c < cfg.cones.size(); ++c) {
        for (double d : {cfg.dMin, cfg.dMax}) {
            for (double h : cfg.hGrid) {
                ProbeParams params = base_params(cfg);
                params.d = d;
                params.h = h;
                const BoundaryField f = probe_trace(cfg.cones[c], waves, params, mesh);
                write_probe_trace_csv(int(c), d, h, mesh, f, os, header);
                header = false;
            }
        }
    }
    std::cout << "probe traces written for " << cfg.cones.size() << " cone(s)\n";
    return 0;
}

int cmd_indicate(const RunConfig& cfg) {
    const Mesh mesh =
        generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
    const WaveNumbers waves = WaveNumbers::from_material(cfg.material);
    const IndicatorContext ctx(mesh, cfg.material);
    std::vector<SweepResult> rows;
    for (std::size_t c = 0; c < cfg.cones.size(); ++c) {
        for (double d : {cfg.dMin, cfg.dMax}) {
            rows.push_back(h_sweep(ctx, cfg.cones[c], waves, base_params(cfg), d, cfg.hGrid,
                                   cfg.noiseLevel, cfg.seed, int(c)));
        }
    }
    std::ofstream os(fs::path(cfg.outputDir) / "indicator_samples.csv");
    write_sweep_csv(rows, os);

    // nodal field export for the first cone at (dMax, largest h)
    if (!cfg.cones.empty()) {
        ProbeParams params = base_params(cfg);
        const BoundaryField f = probe_trace(cfg.cones.front(), waves, params, mesh);
        const auto [u, u0] = ctx.solve_pair(f);
        std::ofstream fullOs(fs::path(cfg.outputDir) / "solution_full.csv");
        write_solution_csv(mesh, u.values, fullOs);
        std::ofstream bgOs(fs::path(cfg.outputDir) / "solution_background.csv");
        write_solution_csv(mesh, u0.values, bgOs);
    }
    double floorLevel = 0.0;
    for (const SweepResult& r : rows)
        for (const IndicatorSample& s : r.samples)
            floorLevel = std::max(floorLevel,
                                  1e2 * std::numeric_limits<double>::epsilon() * s.energyScale);
    std::cout << "indicator samples written; numerical floor " << format_double(floorLevel)
              << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const Mesh mesh =
        generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
    const WaveNumbers waves = WaveNumbers::from_material(cfg.material);
    const IndicatorContext ctx(mesh, cfg.material);
    const double dMid = 2.0 / (1.0 / cfg.dMin + 1.0 / cfg.dMax);

    std::vector<SweepResult> sweeps;
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < cfg.cones.size(); ++c) {
        for (double d : {cfg.dMin, dMid, cfg.dMax}) {
            const SweepResult s = h_sweep(ctx, cfg.cones[c], waves, base_params(cfg), d,
                                          cfg.hGrid, cfg.noiseLevel, cfg.seed, int(c));
            summary.push_back({{"cone", c},
                               {"d", d},
                               {"slope", s.slope},
                               {"classification", to_string(s.classification)},
                               {"underflow_floor", s.underflowFloor}});
            sweeps.push_back(s);
        }
    }
    std::ofstream os(fs::path(cfg.outputDir) / "sweep_table.csv");
    write_sweep_csv(sweeps, os);
    write_text_file((fs::path(cfg.outputDir) / "sweep_summary.json").string(),
                    summary.dump(1, '\t') + "\n");
    std::cout << summary.dump(1, '\t') << "\n";
    return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
    const Mesh mesh =
        generate_mesh(cfg.domain, cfg.material, cfg.meshSize, cfg.refineInclusionBoundary);
    const WaveNumbers waves = WaveNumbers::from_material(cfg.material);
    const IndicatorContext ctx(mesh, cfg.material);

    ReconstructOptions opts;
    opts.dMin = cfg.dMin;
    opts.dMax = cfg.dMax;
    opts.bisectionTol = cfg.bisectionTol;
    opts.hGrid = cfg.hGrid;
    opts.carveGridN = cfg.carveGridN;
    opts.noiseLevel = cfg.noiseLevel;
    opts.seed = cfg.seed;
    opts.jobs = effective_jobs(cfg);

    const ReconstructionResult result =
        trace_boundary(ctx, cfg.cones, waves, base_params(cfg), cfg.domain, opts);

    std::ofstream os(fs::path(cfg.outputDir) / "sweep_table.csv");
    write_sweep_csv(result.sweeps, os);
    write_text_file((fs::path(cfg.outputDir) / "reconstruction.json").string(),
                    reconstruction_json(result));
    if (cfg.plot)
        write_text_file((fs::path(cfg.outputDir) / "reconstruction.svg").string(),
                        reconstruction_svg(cfg, result));

    for (const DirectionEstimate& dir : result.directions) {
        std::cout << "cone N=" << dir.frame.order << " theta0=" << format_double(dir.frame.axis)
                  << ": ";
        if (dir.detected)
            std::cout << "s_star=" << format_double(dir.sStar)
                      << " d_star=" << format_double(dir.dStar) << "\n";
        else
            std::cout << (dir.flag.empty() ? "no detection" : dir.flag) << "\n";
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const ValidationReport report = run_validation(cfg);
    write_text_file((fs::path(cfg.outputDir) / "validation_report.json").string(),
                    validation_json(report));
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const ValidationCheck& c : report.checks) {
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.suite << ": " << c.name
                  << " (measured " << format_double(c.measured) << ", tolerance "
                  << format_double(c.tolerance) << ")\n";
        if (!c.pass)
            failures.push_back({{"suite", c.suite}, {"name", c.name}, {"measured", c.measured},
                                {"tolerance", c.tolerance}});
    }
    if (!failures.empty()) {
        std::cerr << failures.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enclosure-method simulator and reconstruction toolkit for 2D elastic waves"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOverrides cli;
    app.add_option("--config", cli.configPath, "Path to the run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", cli.outDir, "Output directory (overrides output.directory)");
    app.add_flag("--plot", cli.plot, "Emit SVG plots");
    app.add_option("--jobs", cli.jobs, "Concurrent direction tasks (0 = hardware)");
    app.add_option("--seed", cli.seed, "Noise seed (overrides noise.seed)");
    app.add_option("--noise", cli.noise, "Multiplicative |E| noise level (overrides noise.level)");

    app.add_subcommand("mesh", "Generate the triangulation and export it");
    app.add_subcommand("probe", "Evaluate probe traces on the boundary nodes");
    app.add_subcommand("indicate", "Evaluate the indicator over the h-grid at dMin and dMax");
    app.add_subcommand("sweep", "Classify h-sweeps at dMin, dMid and dMax");
    app.add_subcommand("reconstruct", "Estimate s* per cone and emit the carve-out");
    app.add_subcommand("validate", "Run the module property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(cli);
        prepare_output(cfg);
        if (app.got_subcommand("mesh")) return cmd_mesh(cfg);
        if (app.got_subcommand("probe")) return cmd_probe(cfg);
        if (app.got_subcommand("indicate")) return cmd_indicate(cfg);
        if (app.got_subcommand("sweep")) return cmd_sweep(cfg);
        if (app.got_subcommand("reconstruct")) return cmd_reconstruct(cfg);
        if (app.got_subcommand("validate")) return cmd_validate(cfg);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 0;
}
