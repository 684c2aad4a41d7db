#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "morse/export.hpp"
#include "morse/scenario.hpp"
#include "morse/simplicial.hpp"

using namespace morse;

int main(int argc, char** argv)
{
    CLI::App app{"Morse homology engine: gradient-flow chain complexes on implicit "
                 "surfaces, checked against simplicial references"};
    app.require_subcommand(1);

    // run
    std::string run_name, report_path, export_dir, export_format = "csv", plane = "xz";
    std::string asset_dir;
    int seeds = 0, jobs = 1;
    double tol_grad = 0.0, level_bias = 0.0;
    auto* run = app.add_subcommand("run", "run a scenario end to end");
    run->add_option("scenario", run_name, "scenario name (see `list`)")->required();
    run->add_option("--report", report_path, "write the JSON report to this path");
    run->add_option("--export-flowlines", export_dir, "write flow lines into this directory");
    run->add_option("--format", export_format, "flow line format: csv|svg")
        ->check(CLI::IsMember({"csv", "svg"}));
    run->add_option("--plane", plane, "SVG projection plane: xy|xz|yz")
        ->check(CLI::IsMember({"xy", "xz", "yz"}));
    run->add_option("--seeds", seeds, "seeds per index-2 source (default 64)");
    run->add_option("--tol-grad", tol_grad, "critical-point gradient tolerance");
    run->add_option("--level-bias", level_bias, "position of the counting level in (0,1)");
    run->add_option("--jobs", jobs, "parallel workers for connection pairs");
    run->add_option("--assets", asset_dir, "mesh asset directory (or MORSE_ASSET_DIR)");

    auto* list = app.add_subcommand("list", "list registered scenarios");

    std::string mesh_path, values_path;
    auto* meshcmd = app.add_subcommand("mesh-homology", "integer homology of an OFF mesh");
    meshcmd->add_option("mesh", mesh_path, "OFF file")->required();
    meshcmd->add_option("--values", values_path, "per-vertex value file");

    std::string filt_name;
    auto* filt = app.add_subcommand("filtration", "sublevel filtration rank check");
    filt->add_option("scenario", filt_name, "scenario name")->required();
    filt->add_option("--assets", asset_dir, "mesh asset directory (or MORSE_ASSET_DIR)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& s : scenario_registry())
                std::cout << s.name << (s.mesh_only ? "  [mesh-only]  " : "  ")
                          << s.description << "\n";
            return 0;
        }
        if (meshcmd->parsed()) {
            const SimplicialComplex sc = load_mesh_file(mesh_path, values_path);
            const auto c = sc.counts();
            std::cout << "mesh: " << mesh_path << "\n";
            std::cout << "counts: " << c[0] << " vertices, " << c[1] << " edges, " << c[2]
                      << " triangles; Euler characteristic " << sc.euler_characteristic()
                      << "\n";
            for (const auto& w : sc.warnings)
                std::cout << "warning: " << w << "\n";
            std::cout << "homology: " << simplicial_homology(sc).to_string() << "\n";
            return 0;
        }
        if (filt->parsed()) {
            RunOptions opts;
            opts.asset_dir = asset_dir;
            const FiltrationReport rep = run_filtration(filt_name, opts);
            std::cout << filtration_summary(filt_name, rep);
            return rep.pass ? 0 : 1;
        }

        RunOptions opts;
        opts.seeds = seeds;
        opts.tol_grad = tol_grad;
        opts.level_bias = level_bias;
        opts.jobs = jobs;
        opts.asset_dir = asset_dir;
        const Report rep = run_scenario(run_name, opts);
        std::cout << report_summary(rep);
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            if (!out)
                throw Error("cannot write report to " + report_path);
            out << report_to_json(rep);
            std::cout << "report written to " << report_path << "\n";
        }
        if (!export_dir.empty()) {
            if (export_format == "csv") {
                const auto files = write_flowlines_csv(rep, export_dir);
                std::cout << files.size() << " flow line file(s) in " << export_dir << "\n";
            } else {
                std::cout << write_flowlines_svg(rep, export_dir, plane) << "\n";
            }
        }
        return rep.pass() ? 0 : 1;
    } catch (const UnknownScenario& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
