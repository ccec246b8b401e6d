// Shared fixtures: the realization x schedule suite used by the acceptance run
// and several unit tests.
#pragma once

#include "lrinv/subspace.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace lrinv::testing {

struct SuiteCase {
    std::string name;
    HamiltonianModel model;
    AuxiliaryState init;
    // false for realizations whose gauge is not unitary (gho)
    bool hermitian = true;
};

inline TimeFunction sampled_table(double (*f)(double), double t0, double t1, int knots) {
    std::vector<std::pair<double, double>> k;
    for (int i = 0; i < knots; ++i) {
        const double t = t0 + (t1 - t0) * i / (knots - 1);
        k.emplace_back(t, f(t));
    }
    return TimeFunction::table(std::move(k));
}

inline double table_omega(double t) { return 1.0 + 0.2 * std::sin(0.7 * t); }
inline double table_theta(double t) { return 0.6 + 0.3 * std::sin(0.5 * t + 0.2); }
inline double table_phi(double t) { return 0.4 + 0.3 * t + 0.1 * std::cos(0.9 * t); }

inline constexpr double kSuiteT1 = 10.0;
inline constexpr int kSuiteNodes = 401;

inline std::vector<double> suite_grid() { return uniform_grid(0.0, kSuiteT1, kSuiteNodes); }

struct NamedSchedule {
    std::string name;
    CoefficientSchedule schedule;
    bool aligned;
};

inline std::vector<NamedSchedule> suite_schedules() {
    // table knots sit on every second grid node
    const int knots = (kSuiteNodes - 1) / 2 + 1;
    return {
        {"static", {TimeFunction::constant(1.3), TimeFunction::constant(0.7), TimeFunction::constant(0.4)}, true},
        {"rotating", {TimeFunction::constant(1.0), TimeFunction::constant(0.6), TimeFunction::linear(0.0, 0.8)}, false},
        {"table",
         {sampled_table(table_omega, 0.0, kSuiteT1, knots), sampled_table(table_theta, 0.0, kSuiteT1, knots),
          sampled_table(table_phi, 0.0, kSuiteT1, knots)},
         false},
    };
}

inline std::vector<SuiteCase> defect_suite() {
    struct Entry {
        AlgebraRealization r;
        ScalarFunction offset;
        bool hermitian;
    };
    std::vector<Entry> realizations = {
        {spin_j(0.5), ScalarFunction::zero(), true},
        {spin_j(1.0), ScalarFunction::zero(), true},
        {spin_j(2.0), ScalarFunction::zero(), true},
        {schwinger_su2(4), TimeFunction::sinusoid(0.2, 0.1, 0.5, 0.0), true},
        {gho_realization(40), ScalarFunction::zero(), false},
        {two_level_realization(), ScalarFunction::zero(), true},
    };
    std::vector<SuiteCase> out;
    for (const auto& e : realizations) {
        for (const auto& s : suite_schedules()) {
            HamiltonianModel model{e.r, s.schedule, e.offset};
            const AuxiliaryState init =
                s.aligned ? aligned_state(e.r.constants, s.schedule.at(0.0)) : AuxiliaryState{0.9, 0.5};
            std::string name = e.r.name + "(dim " + std::to_string(e.r.dim()) + ")/" + s.name;
            out.push_back({std::move(name), std::move(model), init, e.hermitian});
        }
    }
    return out;
}

inline std::vector<SuiteCase> hermitian_suite() {
    std::vector<SuiteCase> out;
    for (auto& c : defect_suite())
        if (c.hermitian) out.push_back(std::move(c));
    return out;
}

inline JcSchedules detuned_jc_schedules() {
    return {TimeFunction::constant(1.0), TimeFunction::sinusoid(0.9, 0.1, 0.7, 0.0),
            TimeFunction::sinusoid(0.3, 0.1, 1.1, 0.0), TimeFunction::linear(0.0, 0.2)};
}

}  // namespace lrinv::testing
