#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlbif/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal quasilinear bifurcation toolkit"};
    app.require_subcommand(1);

    std::string config;
    nlbif::RunOptions opts;
    std::string out;
    CLI::App* run = app.add_subcommand("run", "Execute the tasks of a JSON run configuration");
    run->add_option("config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory (overrides output_dir)");
    run->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--tol-scale", opts.tol_scale, "Multiply every tolerance by this factor")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opts.out = out;
    const nlbif::RunResult result = nlbif::run_file(config, opts, std::cerr);
    if (result.status == 0) {
        std::cout << "ok: " << result.artifacts.size() << " artifacts in " << result.out_dir.string() << "\n";
    } else if (result.status == 1) {
        std::cout << "failed in task '" << result.failed_task << "': " << result.message << "\n";
    }
    return result.status;
}
