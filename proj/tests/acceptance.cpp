// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "lrinv/commands.hpp"
#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace lrinv;
using namespace lrinv::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Outcome closure() {
    double exact = 0.0, truncated = 0.0;
    const std::vector<AlgebraRealization> exact_set = {spin_j(0.5), spin_j(1.0), spin_j(1.5), spin_j(2.0),
                                                       schwinger_su2(1), schwinger_su2(4), two_level_realization()};
    const std::vector<AlgebraRealization> truncated_set = {su11_discrete(0.5, 30), su11_discrete(1.5, 30),
                                                           gho_realization(40)};
    for (const auto& r : exact_set) exact = std::max(exact, verify_realization(r, 1e-13).max());
    for (const auto& r : truncated_set) truncated = std::max(truncated, verify_realization(r, 1e-9).max());
    return {exact < 1e-13 && truncated < 1e-9,
            "exact " + sci(exact) + " (< 1e-13), truncated interior " + sci(truncated) + " (< 1e-9)"};
}

struct Solved {
    SuiteCase c;
    AuxiliaryTrajectory traj;
};

std::vector<Solved> solve_all(const std::vector<SuiteCase>& suite) {
    std::vector<Solved> out;
    for (const auto& c : suite) out.push_back({c, solve_auxiliary(c.model, c.init, suite_grid(), 1e-12)});
    return out;
}

Outcome worst_over(const std::vector<Solved>& runs, double limit, const char* what,
                   const std::function<double(const Solved&)>& metric) {
    double worst = 0.0;
    std::string where;
    for (const auto& run : runs) {
        const double v = metric(run);
        if (!(v <= worst)) {
            worst = v;
            where = run.c.name;
        }
    }
    return {worst < limit, std::string(what) + " " + sci(worst) + " at " + where + " (< " + sci(limit) + ")"};
}

Outcome cyclic_phase() {
    const double nu = 0.5, theta = kPi / 3.0;
    HamiltonianModel model = spin_model(0.5, {TimeFunction::constant(1.0), TimeFunction::constant(theta),
                                              TimeFunction::linear(0.0, nu)});
    const AuxiliaryState init = rotating_fixed_point(model.realization.constants, 1.0, theta, nu, 0.0);
    const auto traj = solve_auxiliary(model, init, uniform_grid(0.0, 2.0 * kPi / nu, 401), 1e-12);
    const double phi_g = accumulate_phases(model, traj, 0.5).back().phi_g;
    const double expected = cyclic_geometric_phase(init.a, 0.5, 1.0, 1);
    const double err = std::abs(phi_g - expected);
    const double err_pi = std::abs(expected - kPi);
    return {err < 1e-8 && err_pi < 1e-12,
            "a = " + sci(init.a) + ", phi_g = " + format_double(phi_g) + ", closed form " + format_double(expected) +
                ", |diff| " + sci(err) + " (< 1e-8)"};
}

Outcome jc_block_law() {
    double law = 0.0, identity = 0.0, commutator_law = 0.0, conservation = 0.0;
    bool lambdas = true;
    for (int k : {1, 2}) {
        const SusyJCModel model = build_susy_jc(k, 6, detuned_jc_schedules());
        const auto d = block_decompose(model);
        for (const auto& b : d.blocks) {
            if (!b.two_dimensional()) continue;
            const int n = static_cast<int>(b.basis[0] / 2);
            double expected = 1.0;
            for (int i = n + 1; i <= n + k; ++i) expected *= i;
            lambdas = lambdas && b.lambda == expected;
            const AlgebraRealization& r = b.model->realization;
            const StructureConstants fit = fit_structure_constants(r.A, r.B, r.C);
            law = std::max({law, std::abs(fit.m() - 1.0), std::abs(fit.n() - 2.0 * expected) / (2.0 * expected)});
            const Matrix sz = restrict_to(model.sigma_z, b.basis);
            commutator_law = std::max(commutator_law, (commutator(r.B, r.A) - expected * sz).norm());
        }
        for (double t : {0.0, 0.37, 1.9, 4.2, 7.7}) {
            const Matrix h = model.hamiltonian(t);
            identity = std::max(identity, (h - model.susy_form(t)).cwiseAbs().maxCoeff());
            conservation = std::max(conservation, commutator(model.N_prime, h).norm());
        }
    }
    const bool pass = lambdas && law < 1e-12 && identity < 1e-12 && commutator_law < 1e-12 && conservation < 1e-12;
    return {pass, std::string("lambda = (n+k)!/n! ") + (lambdas ? "ok" : "MISMATCH") + ", (m,n) law " + sci(law) +
                      ", [Q^dag,Q] - lambda sz " + sci(commutator_law) + ", Hamiltonian forms " + sci(identity) +
                      ", [N',H] " + sci(conservation)};
}

Outcome block_vs_full() {
    const SusyJCModel model = build_susy_jc(1, 6, detuned_jc_schedules());
    const auto d = block_decompose(model);
    const auto grid = uniform_grid(0.0, 10.0, 401);
    Vector psi0 = Vector::Zero(model.space.dim());
    psi0(model.space.index(0, Atom::ground)) = Complex(0.3, 0.1);
    psi0(model.space.index(0, Atom::excited)) = 0.5;
    psi0(model.space.index(1, Atom::ground)) = Complex(0.2, -0.4);
    psi0(model.space.index(2, Atom::excited)) = Complex(0.0, 0.45);
    psi0(model.space.index(4, Atom::ground)) = 0.35;
    psi0.normalize();
    const auto blocks = propagate_by_blocks(model, d, psi0, grid, {0.9, 0.5}, 1e-12);
    const auto oracle = oracle_propagate([&](double t) { return model.hamiltonian(t); }, psi0, grid, 1e-12, true);
    const auto f = fidelity(blocks, oracle);
    const double worst = *std::min_element(f.begin(), f.end());
    return {worst >= 1.0 - 1e-8, "min fidelity 1 - " + sci(1.0 - worst) + " (>= 1 - 1e-8)"};
}

Outcome cavity() {
    double conservation = 0.0, closure = 0.0, casimir = 0.0;
    int blocks = 0;
    auto check = [&](const GeneralizedCavityModel& model) {
        const Matrix delta = model.delta();
        for (double t : {0.0, 0.6, 2.3, 5.1})
            conservation = std::max(conservation, commutator(delta, model.hamiltonian(t)).norm());
        for (const auto& b : delta_blocks(model)) {
            if (b.basis.size() != 2) continue;
            const SigmaOperators s = sigma_block_operators(model, b.delta);
            closure = std::max({closure, (commutator(s.s1, s.s2) - kI * s.s3).norm(),
                                (commutator(s.s2, s.s3) - kI * s.s1).norm(),
                                (commutator(s.s3, s.s1) - kI * s.s2).norm()});
            const Matrix c = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3;
            casimir = std::max(casimir, (c - 0.75 * Matrix::Identity(2, 2)).norm());
            ++blocks;
        }
    };
    const TimeFunction omega = TimeFunction::sinusoid(1.0, 0.1, 0.8, 0.0);
    check(build_generalized_cavity(CavityInstance::oscillator, 8, {ScalarFunction::zero(), omega},
                                   {TimeFunction::constant(0.45), TimeFunction::linear(0.0, 0.01)},
                                   TimeFunction::sinusoid(0.3, 0.1, 1.3, 0.0), TimeFunction::linear(0.0, 0.3)));
    for (double l : {0.5, 1.0, 2.0, 3.5})
        check(hydrogenlike_model(l, TimeFunction::sinusoid(0.8, 0.2, 0.6, 0.0), TimeFunction::linear(0.3, 0.05)));
    const bool pass = conservation < 1e-12 && closure < 1e-12 && casimir < 1e-12 && blocks > 0;
    return {pass, "[Delta,H] " + sci(conservation) + ", su(2) closure " + sci(closure) + ", Casimir " + sci(casimir) +
                      " over " + std::to_string(blocks) + " blocks (< 1e-12)"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / ("lrinv_determinism_" + std::to_string(::getpid()));
    fs::remove_all(base);
    const std::string scenario = std::string(LRINV_TEST_DATA) + "/spin_one_rotating.scn";
    bool same = true;
    std::string files;
    for (const char* verb : {"solve", "sweep"}) {
        std::string run[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path dir = base / (std::string(verb) + std::to_string(i));
            std::string cmd = std::string("\"") + LRINV_CLI_PATH + "\" " + verb + " --scenario \"" + scenario +
                              "\" --out \"" + dir.string() + "\"";
            if (std::string(verb) == "sweep") cmd += " --axis schedule.theta=constant\\ 0.3,constant\\ 0.6";
            cmd += " > \"" + (base / (std::string(verb) + std::to_string(i) + ".stdout")).string() + "\"";
            fs::create_directories(base);
            if (std::system(cmd.c_str()) != 0) return {false, std::string(verb) + " run failed: " + cmd};
            std::vector<fs::path> names;
            for (const auto& entry : fs::directory_iterator(dir)) names.push_back(entry.path());
            std::sort(names.begin(), names.end());
            for (const auto& n : names) run[i] += n.filename().string() + "\n" + slurp(n);
            run[i] += slurp(base / (std::string(verb) + std::to_string(i) + ".stdout"));
        }
        same = same && !run[0].empty() && run[0] == run[1];
        files += std::string(verb) + " " + std::to_string(run[0].size()) + " bytes; ";
    }
    fs::remove_all(base);
    return {same, "two runs byte-identical: " + files};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Outcome()>& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };

    const auto all = solve_all(defect_suite());
    const auto herm = solve_all(hermitian_suite());

    report(1, "Algebra closure", closure);
    report(2, "Invariant defect", [&] {
        return worst_over(all, 1e-8, "max defect", [](const Solved& s) { return invariant_defect(s.c.model, s.traj); });
    });
    report(3, "Spectrum constancy", [&] {
        return worst_over(herm, 1e-8, "max eigenvalue drift",
                          [](const Solved& s) { return invariant_spectrum_drift(s.c.model.realization, s.traj).drift; });
    });
    report(4, "Gauge identity", [&] {
        return worst_over(herm, 1e-10, "max ||V^dag I V - C||", [](const Solved& s) {
            const AlgebraRealization& r = s.c.model.realization;
            double worst = 0.0;
            for (std::size_t i = 0; i < s.traj.size(); ++i) {
                const GaugeOperator v = build_gauge(r, s.traj.state(i));
                worst = std::max(worst, (conjugated_invariant(v, invariant_at(r, s.traj.state(i))) - r.C).norm());
            }
            return worst;
        });
    });
    report(5, "Effective Hamiltonian", [&] {
        return worst_over(herm, 1e-6, "max residual", [](const Solved& s) {
            const HamiltonianModel& m = s.c.model;
            const double dt = default_difference_step(s.traj);
            const Eigen::Index dim = m.realization.dim();
            double worst = 0.0;
            for (std::size_t i = 1; i + 1 < s.traj.size(); ++i) {
                const double t = s.traj.times[i];
                const Matrix numeric = effective_hamiltonian_numeric(m, s.traj, i, dt);
                const Matrix expected = effective_coefficient(m, t, s.traj.state(i), s.traj.b_dot[i]) * m.realization.C +
                                        m.scalar_offset(t) * Matrix::Identity(dim, dim);
                worst = std::max(worst, (numeric - expected).norm());
            }
            return worst;
        });
    });
    report(6, "Exact vs oracle fidelity", [&] {
        return worst_over(herm, 1e-8, "1 - min fidelity", [](const Solved& s) {
            const HamiltonianModel& m = s.c.model;
            const Matrix v0 = build_gauge(m.realization, s.traj.state(0)).matrix;
            double worst = 0.0;
            for (const auto& pair : c_eigenbasis(m.realization)) {
                const auto rep = evolve_exact(m, s.traj, pair.lambda, pair.vector);
                const auto oracle = oracle_propagate(m, v0 * pair.vector, s.traj.times, 1e-12);
                for (double f : fidelity(rep.states, oracle)) worst = std::max(worst, 1.0 - f);
            }
            return worst;
        });
    });
    report(7, "Phase-route consistency", [&] {
        return worst_over(herm, 1e-6, "max |lr_phase - (phi_d + phi_g)|", [](const Solved& s) {
            double worst = 0.0;
            for (const auto& pair : c_eigenbasis(s.c.model.realization)) {
                const auto lr = lr_phase(s.c.model, s.traj, pair.vector);
                const auto ph = accumulate_phases(s.c.model, s.traj, pair.lambda);
                worst = std::max(worst, std::abs(lr.back() - ph.back().phi_total));
            }
            return worst;
        });
    });
    report(8, "Cyclic geometric phase", cyclic_phase);
    report(9, "JC block law", jc_block_law);
    report(10, "Block vs full equivalence", block_vs_full);
    report(11, "Generalized cavity", cavity);
    report(12, "CLI determinism", determinism);

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
