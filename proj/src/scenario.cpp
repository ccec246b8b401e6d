#include "lrinv/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lrinv {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_number(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (value.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError(key + ": not a number: '" + value + "'");
    return v;
}

int to_integer(const std::string& key, const std::string& value) {
    const double v = to_number(key, value);
    if (v != std::round(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer, got '" + value + "'");
    return static_cast<int>(v);
}

TimeFunction schedule_function(const Scenario& sc, const std::string& key) {
    auto it = sc.schedule_params.find(key);
    if (it == sc.schedule_params.end()) throw ConfigError("missing key 'schedule." + key + "'");
    try {
        return TimeFunction::parse(it->second);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("schedule." + key + ": " + e.what());
    }
}

bool is_keyword(const std::string& v) { return v == "aligned" || v == "fixed-point"; }

}  // namespace

void assign(Scenario& sc, const std::string& key, const std::string& value) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ConfigError("key '" + key + "' has no section");
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);
    if (name.empty()) throw ConfigError("key '" + key + "' has an empty name");

    if (section == "model") {
        if (name == "name")
            sc.model_name = value;
        else
            sc.model_params[name] = value;
    } else if (section == "schedule") {
        static const std::set<std::string> allowed = {"omega", "theta", "phi", "offset"};
        if (!allowed.count(name)) throw ConfigError("unknown key '" + key + "'");
        sc.schedule_params[name] = value;
    } else if (section == "initial") {
        if (name == "lambda_index")
            sc.lambda_index = to_integer(key, value);
        else if (name == "basis_state")
            sc.basis_state = to_integer(key, value);
        else if (name == "a0") {
            if (!is_keyword(value)) to_number(key, value);
            sc.a0 = value;
        } else if (name == "b0") {
            if (!is_keyword(value)) to_number(key, value);
            sc.b0 = value;
        } else
            throw ConfigError("unknown key '" + key + "'");
    } else if (section == "grid") {
        if (name == "t0")
            sc.t0 = to_number(key, value);
        else if (name == "t1")
            sc.t1 = to_number(key, value);
        else if (name == "nodes")
            sc.nodes = to_integer(key, value);
        else
            throw ConfigError("unknown key '" + key + "'");
    } else if (section == "tolerances") {
        const double v = to_number(key, value);
        if (!(v > 0.0)) throw ConfigError(key + " must be positive");
        if (name == "ode_tol")
            sc.tolerances.ode_tol = v;
        else if (name == "defect_tol")
            sc.tolerances.defect_tol = v;
        else if (name == "fidelity_tol")
            sc.tolerances.fidelity_tol = v;
        else
            throw ConfigError("unknown key '" + key + "'");
    } else {
        throw ConfigError("unknown section in key '" + key + "'");
    }
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
        try {
            assign(sc, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    validate(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void validate(const Scenario& sc) {
    if (sc.model_name.empty()) throw ConfigError("missing key 'model.name'");
    if (sc.nodes < 3) throw ConfigError("grid.nodes must be at least 3");
    if (!(sc.t1 > sc.t0)) throw ConfigError("grid.t1 must exceed grid.t0");
    if (sc.lambda_index && sc.basis_state) throw ConfigError("initial.lambda_index and initial.basis_state are exclusive");
    if (sc.lambda_index && *sc.lambda_index < 0) throw ConfigError("initial.lambda_index must be non-negative");
    if (sc.basis_state && *sc.basis_state < 0) throw ConfigError("initial.basis_state must be non-negative");
    if (is_keyword(sc.a0) && sc.b0 && *sc.b0 != sc.a0)
        throw ConfigError("initial.b0 must be omitted or equal to initial.a0 = " + sc.a0);
    if (!is_keyword(sc.a0) && !sc.b0) throw ConfigError("initial.b0 is required when initial.a0 is numeric");
    if (sc.b0 && is_keyword(*sc.b0) && *sc.b0 != sc.a0) throw ConfigError("initial.b0 keyword requires the same initial.a0");
    if (sc.block_model() && !sc.schedule_params.empty())
        throw ConfigError("susy-jc takes its schedules from model.* keys, not schedule.*");
}

HamiltonianModel build_model(const Scenario& sc) {
    if (sc.block_model()) throw ConfigError("model 'susy-jc' has no global three-generator form; use the blocks verb");
    ParamSet params = sc.model_params;
    for (const auto& [key, value] : sc.schedule_params) {
        if (params.count(key)) throw ConfigError("'" + key + "' given both as model and schedule key");
        params[key] = value;
    }
    try {
        return model_catalog(sc.model_name, params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

SusyJCModel build_jc(const Scenario& sc) {
    if (!sc.block_model()) throw ConfigError("model '" + sc.model_name + "' is not a block model");
    static const std::set<std::string> allowed = {"k", "n_max", "omega", "omega0", "g_mod", "g_arg"};
    for (const auto& [key, value] : sc.model_params)
        if (!allowed.count(key)) throw ConfigError("susy-jc: unknown parameter '" + key + "'");
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = sc.model_params.find(key);
        if (it == sc.model_params.end()) throw ConfigError("susy-jc: missing parameter '" + key + "'");
        return it->second;
    };
    auto function = [&](const std::string& key) {
        try {
            return TimeFunction::parse(get(key));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model." + key + ": " + e.what());
        }
    };
    const int k = to_integer("model.k", get("k"));
    const int n_max = to_integer("model.n_max", get("n_max"));
    JcSchedules sch{function("omega"), function("omega0"), function("g_mod"),
                    sc.model_params.count("g_arg") ? function("g_arg") : TimeFunction::constant(0.0)};
    try {
        return build_susy_jc(k, n_max, std::move(sch));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

AuxiliaryState initial_state(const Scenario& sc, const HamiltonianModel& model) {
    const StructureConstants& constants = model.realization.constants;
    if (sc.a0 == "aligned") {
        if (!closure_constants(constants).real()) throw ConfigError("initial.a0 = aligned needs an elliptic algebra");
        return aligned_state(constants, model.schedule.at(sc.t0));
    }
    if (sc.a0 == "fixed-point") {
        const TimeFunction omega = schedule_function(sc, "omega");
        const TimeFunction theta = schedule_function(sc, "theta");
        const TimeFunction phi = schedule_function(sc, "phi");
        using Kind = TimeFunction::Kind;
        if (omega.kind() != Kind::constant || theta.kind() != Kind::constant)
            throw ConfigError("initial.a0 = fixed-point needs constant schedule.omega and schedule.theta");
        double nu = 0.0;
        if (phi.kind() == Kind::linear)
            nu = phi.parameters()[1];
        else if (phi.kind() != Kind::constant)
            throw ConfigError("initial.a0 = fixed-point needs a constant or linear schedule.phi");
        if (!closure_constants(constants).real()) throw ConfigError("initial.a0 = fixed-point needs an elliptic algebra");
        return rotating_fixed_point(constants, omega(sc.t0), theta(sc.t0), nu, phi(sc.t0));
    }
    return {to_number("initial.a0", sc.a0), to_number("initial.b0", *sc.b0)};
}

}  // namespace lrinv
