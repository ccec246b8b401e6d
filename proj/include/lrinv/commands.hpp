// commands.hpp: the pipelines behind the CLI verbs
//
// Exit codes: 0 all tolerances met, 1 tolerance violation, 2 config error,
// 3 numerical failure. CSV uses %.17g, '.' decimals and '\n' line ends.

#pragma once

#include "lrinv/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lrinv {

enum ExitCode : int { kExitOk = 0, kExitTolerance = 1, kExitConfig = 2, kExitNumerical = 3 };

struct CommandOptions {
    std::string scenario_path;
    std::optional<std::string> out_dir;
    std::optional<double> ode_tol;
    std::optional<double> defect_tol;
    std::optional<double> fidelity_tol;
    std::string axis;  // sweep only: key=v1,v2,...
};

struct VerifyResult {
    ClosureReport closure;
    double closure_tol = 0.0;
    bool ran_dynamics = false;
    double defect = 0.0;
    SpectrumDrift drift;
    std::optional<double> gauge_identity;  // elliptic hermitian realizations only
    bool pass = false;
};

VerifyResult verify_scenario(const Scenario& sc);

struct SolveResult {
    AuxiliaryTrajectory trajectory;
    std::vector<PhaseBreakdown> phases;
    double lambda = 0.0;
    std::vector<double> fidelity;
    double min_fidelity = 0.0;
    double defect = 0.0;
    double drift = 0.0;
    std::optional<double> lr_phase_gap;  // |lr_phase - phi_total| at the final node
    bool pass = false;
};

SolveResult solve_scenario(const Scenario& sc);

std::string format_double(double v);
std::string solve_csv(const SolveResult& r);
std::string blocks_table(const BlockDecomposition& d, const SusyJCModel& model);

// Parses "key=v1,v2,..."; an empty value list gives an empty axis.
std::pair<std::string, std::vector<std::string>> parse_axis(const std::string& spec);

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_blocks(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace lrinv
