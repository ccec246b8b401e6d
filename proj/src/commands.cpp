#include "lrinv/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace lrinv {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kExactClosureTol = 1e-13;
constexpr double kTruncatedClosureTol = 1e-9;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double mod_two_pi(double v) {
    const double r = std::fmod(v, 2.0 * kPi);
    return r < 0.0 ? r + 2.0 * kPi : r;
}

Scenario load_with_overrides(const CommandOptions& opts) {
    if (opts.scenario_path.empty()) throw ConfigError("--scenario is required");
    Scenario sc = load_scenario(opts.scenario_path);
    if (opts.ode_tol) sc.tolerances.ode_tol = *opts.ode_tol;
    if (opts.defect_tol) sc.tolerances.defect_tol = *opts.defect_tol;
    if (opts.fidelity_tol) sc.tolerances.fidelity_tol = *opts.fidelity_tol;
    for (double v : {sc.tolerances.ode_tol, sc.tolerances.defect_tol, sc.tolerances.fidelity_tol})
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerances must be positive");
    return sc;
}

Json tolerances_json(const Tolerances& t) {
    return Json{{"ode_tol", t.ode_tol}, {"defect_tol", t.defect_tol}, {"fidelity_tol", t.fidelity_tol}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

std::filesystem::path prepare_out(const CommandOptions& opts) {
    std::filesystem::path dir(*opts.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

// Shared error mapping for every verb.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SingularityError& e) {
        err << "singularity: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::logic_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}

const Eigenpair& choose_eigenpair(const std::vector<Eigenpair>& basis, const Scenario& sc) {
    const int index = sc.lambda_index.value_or(0);
    if (index >= static_cast<int>(basis.size()))
        throw ConfigError("initial.lambda_index " + std::to_string(index) + " exceeds the dimension " +
                          std::to_string(basis.size()));
    return basis[static_cast<std::size_t>(index)];
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

VerifyResult verify_scenario(const Scenario& sc) {
    const HamiltonianModel model = build_model(sc);
    const AlgebraRealization& r = model.realization;
    VerifyResult out;
    out.closure_tol = r.exact() ? kExactClosureTol : kTruncatedClosureTol;
    out.closure = verify_realization(r, out.closure_tol);
    if (!out.closure.pass) return out;

    const AuxiliaryState init = initial_state(sc, model);
    const AuxiliaryTrajectory traj = solve_auxiliary(model, init, sc.grid(), sc.tolerances.ode_tol);
    out.ran_dynamics = true;
    out.defect = invariant_defect(model, traj);
    out.drift = invariant_spectrum_drift(r, traj);
    out.pass = out.defect < sc.tolerances.defect_tol;

    const bool elliptic_hermitian = r.hermitian_pair && closure_constants(r.constants).real();
    if (elliptic_hermitian) {
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const GaugeOperator v = build_gauge(r, traj.state(i));
            worst = std::max(worst, (conjugated_invariant(v, invariant_at(r, traj.state(i))) - r.C).norm());
        }
        out.gauge_identity = worst;
        out.pass = out.pass && out.drift.drift < sc.tolerances.defect_tol && worst < 1e-10;
    }
    return out;
}

SolveResult solve_scenario(const Scenario& sc) {
    const HamiltonianModel model = build_model(sc);
    const AlgebraRealization& r = model.realization;
    if (!r.hermitian_pair || !closure_constants(r.constants).real())
        throw ConfigError("solve needs an elliptic realization with B = A^dagger (model '" + sc.model_name + "')");

    SolveResult out;
    const std::vector<double> grid = sc.grid();
    const double tol = sc.tolerances.ode_tol;
    out.trajectory = solve_auxiliary(model, initial_state(sc, model), grid, tol);
    const auto basis = c_eigenbasis(r);
    const Matrix v0 = build_gauge(r, out.trajectory.state(0)).matrix;

    Vector psi0;
    std::vector<Vector> states;
    const Eigenpair* tracked = nullptr;
    if (sc.basis_state) {
        if (*sc.basis_state >= r.dim()) throw ConfigError("initial.basis_state exceeds the dimension");
        psi0 = Vector::Unit(r.dim(), *sc.basis_state);
        states = evolve_superposition(model, out.trajectory, psi0);
        // phase columns follow the component with the largest weight
        double best = -1.0;
        for (const auto& pair : basis) {
            const double w = std::abs((v0 * pair.vector).dot(psi0));
            if (w > best + 1e-12) {
                best = w;
                tracked = &pair;
            }
        }
    } else {
        tracked = &choose_eigenpair(basis, sc);
        psi0 = v0 * tracked->vector;
    }

    EvolutionReport rep = evolve_exact(model, out.trajectory, tracked->lambda, tracked->vector);
    if (!sc.basis_state) states = rep.states;
    out.lambda = tracked->lambda;
    out.phases = rep.phases;
    out.defect = rep.defect;
    out.drift = invariant_spectrum_drift(r, out.trajectory).drift;

    const auto oracle = oracle_propagate(model, psi0, grid, tol);
    out.fidelity = fidelity(states, oracle);
    out.min_fidelity = *std::min_element(out.fidelity.begin(), out.fidelity.end());

    const auto lr = lr_phase(model, out.trajectory, tracked->vector);
    out.lr_phase_gap = std::abs(lr.back() - out.phases.back().phi_total);

    const Tolerances& t = sc.tolerances;
    out.pass = out.min_fidelity >= 1.0 - t.fidelity_tol && out.defect < t.defect_tol && out.drift < t.defect_tol;
    return out;
}

std::string solve_csv(const SolveResult& r) {
    std::string s = "t,a,b,phi_d,phi_g,phi_total,fidelity\n";
    const AuxiliaryTrajectory& tr = r.trajectory;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const PhaseBreakdown& p = r.phases[i];
        for (double v : {tr.times[i], tr.a[i], tr.b[i], p.phi_d, p.phi_g, p.phi_total}) s += format_double(v) + ",";
        s += format_double(r.fidelity[i]) + "\n";
    }
    return s;
}

std::string blocks_table(const BlockDecomposition& d, const SusyJCModel& model) {
    std::string s = "block,kind,basis,lambda,m,n\n";
    int index = 0;
    for (const BlockModel& b : d.blocks) {
        std::string labels;
        for (const auto& l : b.labels) labels += (labels.empty() ? "" : " ") + l;
        s += std::to_string(index++) + "," + (b.two_dimensional() ? "pair" : "singleton") + "," + labels + "," +
             format_double(b.lambda) + ",";
        if (b.two_dimensional())
            s += format_double(b.constants().m()) + "," + format_double(b.constants().n()) + "\n";
        else
            s += ",\n";
    }
    for (Eigen::Index idx : d.excluded) s += "-,excluded," + model.space.label(idx) + ",,,\n";
    return s;
}

std::pair<std::string, std::vector<std::string>> parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--axis expects key=v1,v2,...");
    std::pair<std::string, std::vector<std::string>> out{spec.substr(0, eq), {}};
    const std::string values = spec.substr(eq + 1);
    if (values.empty()) return out;
    std::stringstream in(values);
    for (std::string v; std::getline(in, v, ',');) {
        if (v.empty()) throw ConfigError("--axis contains an empty value");
        out.second.push_back(v);
    }
    return out;
}

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(opts);
        const VerifyResult v = verify_scenario(sc);
        const int status = v.pass ? kExitOk : kExitTolerance;

        Json j;
        j["command"] = "verify";
        j["model"] = sc.model_name;
        j["closure"] = {{"ab", v.closure.ab}, {"ca", v.closure.ca}, {"cb", v.closure.cb},
                        {"tol", v.closure_tol}, {"pass", v.closure.pass}};
        if (!v.closure.pass) err << "closure assertion failed: max residual " << format_double(v.closure.max()) << '\n';
        if (v.ran_dynamics) {
            j["invariant_defect"] = number(v.defect);
            j["spectrum_drift"] = number(v.drift.drift);
            j["spectrum_drift_uses_singular_values"] = v.drift.singular_values;
            j["gauge_identity"] = v.gauge_identity ? number(*v.gauge_identity) : Json(nullptr);
        }
        j["tolerances"] = tolerances_json(sc.tolerances);
        j["pass"] = v.pass;
        j["exit_status"] = status;
        const std::string doc = j.dump(2) + "\n";
        if (opts.out_dir) write_file(prepare_out(opts) / "summary.json", doc);
        out << doc;
        return status;
    });
}

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(opts);
        const SolveResult r = solve_scenario(sc);
        const int status = r.pass ? kExitOk : kExitTolerance;
        const PhaseBreakdown& last = r.phases.back();

        Json j;
        j["command"] = "solve";
        j["model"] = sc.model_name;
        j["lambda"] = r.lambda;
        j["final_time"] = r.trajectory.times.back();
        j["final_phases"] = {{"phi_d", number(last.phi_d)},
                             {"phi_g", number(last.phi_g)},
                             {"phi_total", number(last.phi_total)},
                             {"scalar_phase", number(last.scalar_phase)},
                             {"phi_d_mod_2pi", number(mod_two_pi(last.phi_d))},
                             {"phi_g_mod_2pi", number(mod_two_pi(last.phi_g))},
                             {"phi_total_mod_2pi", number(mod_two_pi(last.phi_total))}};
        j["max_invariant_defect"] = number(r.defect);
        j["max_spectrum_drift"] = number(r.drift);
        j["min_oracle_fidelity"] = number(r.min_fidelity);
        j["lr_phase_gap"] = r.lr_phase_gap ? number(*r.lr_phase_gap) : Json(nullptr);
        j["integrator"] = {{"accepted", r.trajectory.stats.accepted}, {"rejected", r.trajectory.stats.rejected}};
        j["tolerances"] = tolerances_json(sc.tolerances);
        j["pass"] = r.pass;
        j["exit_status"] = status;
        const std::string doc = j.dump(2) + "\n";
        if (opts.out_dir) {
            const auto dir = prepare_out(opts);
            write_file(dir / "solve.csv", solve_csv(r));
            write_file(dir / "summary.json", doc);
        }
        out << doc;
        return status;
    });
}

int cmd_blocks(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario sc = load_with_overrides(opts);
        const SusyJCModel model = build_jc(sc);
        const BlockDecomposition d = block_decompose(model);

        double conservation = 0.0;
        double identity = 0.0;
        for (double t : sc.grid()) {
            const Matrix h = model.hamiltonian(t);
            conservation = std::max(conservation, commutator(model.N_prime, h).norm());
            identity = std::max(identity, (h - model.susy_form(t)).cwiseAbs().maxCoeff());
        }
        double block_law = 0.0;
        for (const BlockModel& b : d.blocks) {
            if (!b.two_dimensional()) continue;
            block_law = std::max(block_law, std::abs(b.constants().m() - 1.0));
            block_law = std::max(block_law, std::abs(b.constants().n() - 2.0 * b.lambda));
        }
        const bool pass = conservation < 1e-12 && identity < 1e-12 && block_law < 1e-12;
        const int status = pass ? kExitOk : kExitTolerance;

        Json j;
        j["command"] = "blocks";
        j["model"] = sc.model_name;
        j["k"] = model.k;
        j["n_max"] = model.space.n_max;
        Json blocks = Json::array();
        for (const BlockModel& b : d.blocks) {
            Json e{{"basis", b.labels}, {"lambda", b.lambda}};
            if (b.two_dimensional()) e["structure_constants"] = {b.constants().m(), b.constants().n()};
            blocks.push_back(e);
        }
        j["blocks"] = blocks;
        Json excluded = Json::array();
        for (Eigen::Index idx : d.excluded) excluded.push_back(model.space.label(idx));
        j["excluded"] = excluded;
        j["max_conservation_residual"] = conservation;
        j["max_susy_form_residual"] = identity;
        j["max_block_law_residual"] = block_law;
        j["pass"] = pass;
        j["exit_status"] = status;

        const std::string table = blocks_table(d, model);
        if (opts.out_dir) {
            const auto dir = prepare_out(opts);
            write_file(dir / "blocks.csv", table);
            write_file(dir / "summary.json", j.dump(2) + "\n");
        }
        out << table;
        return status;
    });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario base = load_with_overrides(opts);
        const auto [key, values] = parse_axis(opts.axis);

        std::vector<Scenario> points;
        for (const auto& v : values) {
            Scenario sc = base;
            assign(sc, key, v);
            validate(sc);
            points.push_back(std::move(sc));
        }

        struct Row {
            int status = kExitOk;
            std::string message;
            double one_minus_cos_a = 0.0;
            SolveResult result;
        };
        std::vector<Row> rows(points.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < points.size(); i = next++) {
                Row& row = rows[i];
                try {
                    row.result = solve_scenario(points[i]);
                    row.one_minus_cos_a = 1.0 - std::cos(row.result.trajectory.a.front());
                    row.status = row.result.pass ? kExitOk : kExitTolerance;
                } catch (const ConfigError& e) {
                    row.status = kExitConfig;
                    row.message = e.what();
                } catch (const std::logic_error& e) {
                    row.status = kExitConfig;
                    row.message = e.what();
                } catch (const NumericalError& e) {
                    row.status = kExitNumerical;
                    row.message = e.what();
                }
            }
        };
        int threads = 1;
        if (const char* env = std::getenv("LRINV_THREADS")) threads = std::max(1, std::atoi(env));
        threads = std::min<int>(threads, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
        std::vector<std::thread> pool;
        for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        std::string table = "value,one_minus_cos_a,phi_d,phi_g,phi_total,min_fidelity,status\n";
        bool any_config = false, any_numerical = false, any_tolerance = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Row& row = rows[i];
            table += values[i] + ",";
            if (row.status == kExitOk || row.status == kExitTolerance) {
                const PhaseBreakdown& p = row.result.phases.back();
                for (double v : {row.one_minus_cos_a, p.phi_d, p.phi_g, p.phi_total, row.result.min_fidelity})
                    table += format_double(v) + ",";
                table += row.status == kExitOk ? "ok\n" : "FAIL\n";
            } else {
                table += ",,,,,ERROR\n";
                err << key << "=" << values[i] << ": " << row.message << '\n';
            }
            any_config |= row.status == kExitConfig;
            any_numerical |= row.status == kExitNumerical;
            any_tolerance |= row.status == kExitTolerance;
        }
        const int status = any_config ? kExitConfig : any_numerical ? kExitNumerical : any_tolerance ? kExitTolerance : kExitOk;

        // monotonicity of the final geometric phase in (1 - cos a0)
        std::vector<std::pair<double, double>> ordered;
        for (const Row& row : rows)
            if (row.status == kExitOk || row.status == kExitTolerance)
                ordered.emplace_back(row.one_minus_cos_a, row.result.phases.back().phi_g);
        std::sort(ordered.begin(), ordered.end());
        bool up = true, down = true;
        for (std::size_t i = 1; i < ordered.size(); ++i) {
            up = up && ordered[i].second >= ordered[i - 1].second;
            down = down && ordered[i].second <= ordered[i - 1].second;
        }

        Json j;
        j["command"] = "sweep";
        j["model"] = base.model_name;
        j["axis"] = key;
        j["points"] = values.size();
        j["failed_points"] = std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.status != kExitOk; });
        j["phi_g_monotone_in_one_minus_cos_a"] = up || down;
        j["tolerances"] = tolerances_json(base.tolerances);
        j["exit_status"] = status;
        if (opts.out_dir) {
            const auto dir = prepare_out(opts);
            write_file(dir / "sweep.csv", table);
            write_file(dir / "summary.json", j.dump(2) + "\n");
        }
        out << table;
        return status;
    });
}

}  // namespace lrinv
