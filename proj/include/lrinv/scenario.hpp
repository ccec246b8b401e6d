// scenario.hpp: the key-value scenario format read by the CLI
//
//   # comment
//   model.name = spin
//   model.j = 0.5
//   schedule.omega = constant 1.3
//   schedule.theta = constant 0.7
//   schedule.phi = linear 0 0.8
//   initial.lambda_index = 0
//   initial.a0 = aligned
//   grid.t0 = 0
//   grid.t1 = 10
//   grid.nodes = 401
//   tolerances.ode_tol = 1e-12
//
// Every key is validated; unknown keys and duplicates are errors.

#pragma once

#include "lrinv/subspace.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace lrinv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double ode_tol = 1e-12;
    double defect_tol = 1e-8;
    double fidelity_tol = 1e-8;
};

struct Scenario {
    std::string model_name;
    ParamSet model_params;     // model.<key> without the prefix
    ParamSet schedule_params;  // omega, theta, phi, offset
    std::optional<int> lambda_index;
    std::optional<int> basis_state;
    std::string a0 = "aligned";  // number, "aligned" or "fixed-point"
    std::optional<std::string> b0;
    double t0 = 0.0;
    double t1 = 0.0;
    int nodes = 0;
    Tolerances tolerances;

    bool block_model() const { return model_name == "susy-jc"; }
    std::vector<double> grid() const { return uniform_grid(t0, t1, nodes); }
};

// Applies one `key = value` assignment; used by the loader and by sweep axes.
void assign(Scenario& sc, const std::string& key, const std::string& value);

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Checks the cross-key invariants (grid, required sections).
void validate(const Scenario& sc);

HamiltonianModel build_model(const Scenario& sc);
SusyJCModel build_jc(const Scenario& sc);

// Resolves initial.a0 / initial.b0 against the model schedule.
AuxiliaryState initial_state(const Scenario& sc, const HamiltonianModel& model);

}  // namespace lrinv
