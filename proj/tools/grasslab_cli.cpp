// Batch front end: angle decompositions, w/v values, positivity
// certifications and immersion checks, with JSON/CSV reports.

#include <CLI11.hpp>
#include <iostream>

#include "grasslab/errors.hpp"
#include "grasslab/runner.hpp"

namespace {

constexpr const char* kCommands[] = {"angles",        "wfun",         "certify-II",
                                     "certify-III",   "scan-f",       "estimate-eps0",
                                     "certify-prop35", "check-immersion", "bridge-check"};

void add_common_options(CLI::App* app, grasslab::RunConfig& cfg) {
    app->add_option("--cluster-tol", cfg.cluster_tol, "angle clustering tolerance");
    app->add_option("--fd-step", cfg.fd_step, "finite-difference step");
    app->add_option("--tol", cfg.cert_tol, "contract tolerance");
    app->add_option("--seed", cfg.seed, "random seed");
    app->add_option("--density", cfg.density, "grid density");
    app->add_option("--samples", cfg.samples, "sample count");
    app->add_option("--ray-samples", cfg.ray_samples, "rays for cone checks");
    app->add_option("--subspace-dim", cfg.subspace_dim, "subspace dimension for random pairs");
    app->add_option("--codim", cfg.codim, "codimension for random pairs");
    app->add_option("--object", cfg.object, "named immersion");
    app->add_option("--q0", cfg.q0, "reference plane: coordinate | inline");
    app->add_option("--inline", cfg.inline_path, "frames file (rows of decimals, blank line between frames)");
    app->add_option("--out", cfg.out, "output path (default stdout)");
    app->add_option("--format", cfg.format, "json | csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for subspace angles, Grassmannian w-values "
                 "and submanifold curvature checks"};
    app.require_subcommand(0, 1);

    grasslab::RunConfig cfg;
    std::string command_flag;
    add_common_options(&app, cfg);
    app.add_option("--command", command_flag, "command name (alternative to a subcommand)");

    for (const char* name : kCommands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common_options(sub, cfg);
    }

    CLI11_PARSE(app, argc, argv);

    if (!app.get_subcommands().empty()) {
        cfg.command = app.get_subcommands().front()->get_name();
    } else {
        cfg.command = command_flag;
    }

    try {
        const grasslab::RunResult result = grasslab::run(cfg);
        grasslab::write_report(result, cfg);
        return result.exit_code;
    } catch (const grasslab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const grasslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
