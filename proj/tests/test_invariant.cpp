#include "catch_amalgamated.hpp"

#include "lrinv/invariant.hpp"

using namespace lrinv;
using Catch::Matchers::WithinAbs;

namespace {

HamiltonianModel generic_spin(double j) {
    return spin_model(j, {TimeFunction::sinusoid(1.0, 0.3, 0.9, 0.1), TimeFunction::linear(0.5, 0.05),
                          TimeFunction::sinusoid(0.2, 0.4, 0.7, 0.0)});
}

}  // namespace

TEST_CASE("closure constants") {
    const ClosureConstants su2 = closure_constants({1.0, 2.0});
    CHECK(su2.real());
    CHECK_THAT(su2.y.real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(su2.x.real(), WithinAbs(1.0, 1e-15));

    const ClosureConstants two_level = closure_constants({2.0, 1.0});
    CHECK_THAT(two_level.s.real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(two_level.y.real(), WithinAbs(2.0, 1e-15));

    const ClosureConstants gho = closure_constants({4.0, 2.0});
    CHECK_THAT(gho.y.real(), WithinAbs(2.0, 1e-15));
    CHECK_THAT(gho.x.real(), WithinAbs(0.5, 1e-15));

    const ClosureConstants su11 = closure_constants({1.0, -2.0});
    CHECK_FALSE(su11.real());
    CHECK_THAT(su11.s.imag(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(su11.y.imag(), WithinAbs(-1.0, 1e-15));
    // y^2 = 2m/n holds on both branches
    CHECK(std::abs(su11.y * su11.y - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("rates satisfy both complex auxiliary equations") {
    for (const StructureConstants sc : {StructureConstants{1.0, 2.0}, StructureConstants{2.0, 1.0},
                                        StructureConstants{4.0, 2.0}, StructureConstants{0.5, 7.0}}) {
        for (const Coefficients c : {Coefficients{1.3, 0.7, 0.4}, Coefficients{0.4, 2.5, -1.9}}) {
            for (const AuxiliaryState st : {AuxiliaryState{0.9, 0.5}, AuxiliaryState{2.2, -3.0}}) {
                const AuxiliaryRates r = auxiliary_rhs(sc, c, st);
                const AuxiliaryResidual res = auxiliary_residual(sc, c, st, r);
                CHECK(res.first < 1e-13);
                CHECK(res.second < 1e-13);
            }
        }
    }
}

TEST_CASE("invariant equation holds pointwise for the analytic rate") {
    const HamiltonianModel model = generic_spin(1.0);
    const AuxiliaryState st{0.8, 0.3};
    const double t = 0.6;
    const AuxiliaryRates r = auxiliary_rhs(model.realization.constants, model.schedule.at(t), st);
    const Matrix inv = invariant_at(model.realization, st);
    const Matrix rate = invariant_rate(model.realization, st, r);
    CHECK((rate - kI * commutator(inv, hamiltonian_at(model, t))).norm() < 1e-13);

    // analytic rate against a centered difference of I along (a_dot, b_dot)
    const double h = 1e-6;
    const Matrix plus = invariant_at(model.realization, {st.a + h * r.a_dot, st.b + h * r.b_dot});
    const Matrix minus = invariant_at(model.realization, {st.a - h * r.a_dot, st.b - h * r.b_dot});
    CHECK((rate - (plus - minus) / (2.0 * h)).norm() < 1e-8);
}

TEST_CASE("aligned state makes I commute with H") {
    for (const AlgebraRealization& r : {spin_j(0.5), spin_j(2.0), two_level_realization()}) {
        const Coefficients c{1.3, 0.7, 0.4};
        const AuxiliaryState st = aligned_state(r.constants, c);
        CHECK(commutator(invariant_at(r, st), generator_hamiltonian(r, c)).norm() < 1e-13);
    }
    // y = 1 gives a = theta
    CHECK_THAT(aligned_state({1.0, 2.0}, {1.0, 0.7, 0.4}).a, WithinAbs(0.7, 1e-15));
}

TEST_CASE("static aligned trajectory is stationary") {
    const HamiltonianModel model =
        spin_model(0.5, {TimeFunction::constant(1.3), TimeFunction::constant(0.7), TimeFunction::constant(0.4)});
    const AuxiliaryState init = aligned_state(model.realization.constants, model.schedule.at(0.0));
    const auto traj = solve_auxiliary(model, init, uniform_grid(0.0, 10.0, 51), 1e-12);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK_THAT(traj.a[i], WithinAbs(0.7, 1e-12));
        CHECK_THAT(traj.b[i], WithinAbs(0.4, 1e-12));
    }
}

TEST_CASE("rotating fixed point co-rotates with the field") {
    const double nu = 0.5, theta = kPi / 3.0;
    const HamiltonianModel model =
        spin_model(0.5, {TimeFunction::constant(1.0), TimeFunction::constant(theta), TimeFunction::linear(0.0, nu)});
    const AuxiliaryState init = rotating_fixed_point(model.realization.constants, 1.0, theta, nu, 0.0);
    // cot a = (cos(pi/3) - 1/2) / sin(pi/3) = 0
    CHECK_THAT(init.a, WithinAbs(kPi / 2.0, 1e-15));
    const auto traj = solve_auxiliary(model, init, uniform_grid(0.0, 4.0 * kPi, 101), 1e-12);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK_THAT(traj.a[i], WithinAbs(kPi / 2.0, 1e-10));
        CHECK_THAT(traj.b[i] - nu * traj.times[i], WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("defect and drift vanish along a generic trajectory") {
    for (double j : {0.5, 1.0, 2.0}) {
        const HamiltonianModel model = generic_spin(j);
        const auto traj = solve_auxiliary(model, {0.9, 0.5}, uniform_grid(0.0, 8.0, 161), 1e-12);
        CHECK(invariant_defect(model, traj) < 1e-12);
        const SpectrumDrift d = invariant_spectrum_drift(model.realization, traj);
        CHECK_FALSE(d.singular_values);
        CHECK(d.drift < 1e-12);
        CHECK(traj.stats.accepted > 0);
    }
}

TEST_CASE("pole policy") {
    const StructureConstants sc{1.0, 2.0};
    CHECK_THROWS_AS(auxiliary_rhs(sc, {1.0, 0.5, 0.0}, {0.0, 0.0}), SingularityError);
    // no transverse drive: continuation keeps a = 0
    const AuxiliaryRates r = auxiliary_rhs(sc, {1.0, 0.0, 0.0}, {0.0, 0.0});
    CHECK(r.a_dot == 0.0);
    CHECK(r.b_dot == 1.0);
}

TEST_CASE("hyperbolic algebras stay on the real section only without transverse drive") {
    const StructureConstants sc{1.0, -2.0};
    CHECK_THROWS_AS(auxiliary_rhs(sc, {1.0, 0.4, 0.0}, {0.5, 0.2}), NumericalError);
    const AuxiliaryRates r = auxiliary_rhs(sc, {1.0, 0.0, 0.0}, {0.5, 0.2});
    CHECK(r.a_dot == 0.0);
    CHECK_THAT(r.b_dot, WithinAbs(1.0, 1e-15));
}

TEST_CASE("single RK4 step agrees with the adaptive trajectory") {
    const HamiltonianModel model = generic_spin(0.5);
    const auto traj = solve_auxiliary(model, {0.9, 0.5}, uniform_grid(0.0, 1.0, 11), 1e-12);
    const AuxiliaryState fwd = auxiliary_step(model, traj.times[4], traj.state(4), 1e-3);
    const AuxiliaryState back = auxiliary_step(model, traj.times[4] + 1e-3, fwd, -1e-3);
    CHECK_THAT(back.a, WithinAbs(traj.a[4], 1e-13));
    CHECK_THAT(back.b, WithinAbs(traj.b[4], 1e-13));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), std::invalid_argument);
    const auto g = uniform_grid(0.0, 1.0, 5);
    CHECK(g.size() == 5);
    CHECK(g[2] == 0.5);
    const HamiltonianModel model = generic_spin(0.5);
    CHECK_THROWS_AS(solve_auxiliary(model, {0.9, 0.5}, {0.0, 0.0, 1.0}, 1e-10), std::invalid_argument);
}
