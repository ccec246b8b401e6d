#include "lrinv/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Exact propagation of three-generator Hamiltonians via invariants"};
    app.require_subcommand(1);

    lrinv::CommandOptions opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opts.scenario_path, "scenario file")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--ode-tol", opts.ode_tol, "override tolerances.ode_tol");
        sub->add_option("--defect-tol", opts.defect_tol, "override tolerances.defect_tol");
        sub->add_option("--fidelity-tol", opts.fidelity_tol, "override tolerances.fidelity_tol");
    };

    auto* verify = app.add_subcommand("verify", "closure, invariant defect, spectrum drift and gauge identity");
    auto* solve = app.add_subcommand("solve", "exact solution with phases, checked against the oracle");
    auto* compare = app.add_subcommand("compare-oracle", "same as solve");
    auto* blocks = app.add_subcommand("blocks", "block decomposition of a block model");
    auto* sweep = app.add_subcommand("sweep", "solve over a parameter axis");
    for (auto* sub : {verify, solve, compare, blocks, sweep}) add_common(sub);
    sweep->add_option("--axis", opts.axis, "key=v1,v2,... (threads from LRINV_THREADS)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lrinv::kExitConfig;
    }

    if (verify->parsed()) return lrinv::cmd_verify(opts, std::cout, std::cerr);
    if (solve->parsed() || compare->parsed()) return lrinv::cmd_solve(opts, std::cout, std::cerr);
    if (blocks->parsed()) return lrinv::cmd_blocks(opts, std::cout, std::cerr);
    return lrinv::cmd_sweep(opts, std::cout, std::cerr);
}
