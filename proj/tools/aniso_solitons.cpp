// Command-line front end: parse flags, run the named pipeline, emit CSV/JSON
// artifacts plus a verification report with deterministic exit codes.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aniso/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"translating solitons of the anisotropic mean curvature flow"};
    app.require_subcommand(1);

    aniso::RunConfig cfg;
    std::string approx_eps_arg, sweep_arg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "solver tolerance")->capture_default_str();
    };

    CLI::App* grim = app.add_subcommand("grim", "planar grim reaper profile");
    grim->add_option("--phi", cfg.phi, "surface tension norm")->required();
    grim->add_option("--psi", cfg.psi, "mobility norm")->required();
    grim->add_option("--c", cfg.c, "translation speed")->capture_default_str();
    grim->add_option("--smooth-eps", cfg.smooth_eps, "mollify phi before solving");
    grim->add_option("--approx-eps", approx_eps_arg,
                     "comma list of decreasing eps for the approximation pipeline");
    grim->add_option("--sweep-c", sweep_arg, "comma list of speeds to run in parallel");
    add_common(grim);

    CLI::App* bowl = app.add_subcommand("bowl", "cylindrical bowl soliton profile");
    bowl->add_option("--F", cfg.F, "surface tension factor")->capture_default_str();
    bowl->add_option("--G", cfg.G, "mobility factor")->capture_default_str();
    bowl->add_option("--xi", cfg.xi, "horizontal norm descriptor")->capture_default_str();
    bowl->add_option("--N", cfg.N, "horizontal dimension")->capture_default_str();
    bowl->add_option("--rmax", cfg.rmax, "profile range")->capture_default_str();
    bowl->add_option("--smooth-eps", cfg.smooth_eps, "mollify F, G before solving");
    add_common(bowl);

    CLI::App* cgrim = app.add_subcommand("crystal-grim", "polygonal grim reaper");
    cgrim->add_option("--wulff", cfg.wulff, "Wulff shape: square, hexagon, octagon");
    cgrim->add_option("--phi", cfg.phi, "polyhedral surface tension norm");
    add_common(cgrim);

    CLI::App* cbowl = app.add_subcommand("crystal-bowl", "crystalline bowl translator");
    cbowl->add_option("--case", cfg.bowl_case, "cylinder or cone")->required();
    cbowl->add_option("--N", cfg.N, "horizontal dimension")->capture_default_str();
    cbowl->add_option("--xi", cfg.xi, "horizontal norm descriptor")->capture_default_str();
    add_common(cbowl);

    CLI::App* dual = app.add_subcommand("dual", "Wulff shape boundary of a norm");
    dual->add_option("--norm", cfg.norm, "norm to dualize")->required();
    dual->add_option("--n", cfg.samples, "boundary sample count")->capture_default_str();
    add_common(dual);

    CLI::App* verify = app.add_subcommand("verify", "re-run checks on stored artifacts");
    verify->add_option("--in", cfg.in, "directory with run.json and profiles")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return aniso::kExitConfig;
    }

    try {
        if (!approx_eps_arg.empty()) cfg.approx_eps = aniso::parse_double_list(approx_eps_arg);
        if (!sweep_arg.empty()) cfg.sweep_c = aniso::parse_double_list(sweep_arg);
    } catch (const aniso::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aniso::kExitConfig;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    return aniso::run(cfg);
}
