// invariant.hpp: Lewis-Riesenfeld invariant of a three-generator Hamiltonian
//
//   I(t) = y { 1/2 sin a e^{-ib} A + 1/2 sin a e^{ib} B } + cos a C
//
// with the auxiliary angles (a, b) driven by the reduced real system derived
// from dI/dt + (1/i)[I, H] = 0.

#pragma once

#include "lrinv/algebra.hpp"
#include "lrinv/ode.hpp"
#include "lrinv/schedules.hpp"

#include <vector>

namespace lrinv {

// s = sqrt(mn/2) (principal root), y = m/s, x = 1/s.
struct ClosureConstants {
    Complex y;
    Complex x;
    Complex s;

    bool real() const { return y.imag() == 0.0 && x.imag() == 0.0; }
};

ClosureConstants closure_constants(const StructureConstants& sc);

struct AuxiliaryState {
    double a = 0.0;
    double b = 0.0;
};

struct AuxiliaryRates {
    double a_dot = 0.0;
    double b_dot = 0.0;
};

// |sin a| below this with a nonzero transverse drive aborts the integration.
inline constexpr double kSingularEpsilon = 1e-10;

Matrix invariant_at(const AlgebraRealization& r, const AuxiliaryState& st);

// dI/dt evaluated analytically from the angle rates.
Matrix invariant_rate(const AlgebraRealization& r, const AuxiliaryState& st, const AuxiliaryRates& rates);

// Throws SingularityError at a pole of the chart with transverse drive, and
// NumericalError when a hyperbolic algebra would push (a, b) off the real axis.
AuxiliaryRates auxiliary_rhs(const StructureConstants& sc, const Coefficients& coeffs, const AuxiliaryState& st);

// Moduli of the two complex auxiliary equations with the given rates substituted.
struct AuxiliaryResidual {
    double first = 0.0;
    double second = 0.0;
};
AuxiliaryResidual auxiliary_residual(const StructureConstants& sc, const Coefficients& coeffs,
                                     const AuxiliaryState& st, const AuxiliaryRates& rates);

// I proportional to the instantaneous H: tan a = tan(theta) / y, b = phi.
AuxiliaryState aligned_state(const StructureConstants& sc, const Coefficients& coeffs);

// Stationary point for w, theta constant and phi = phi0 + nu t:
// b = phi, cot a = (m w cos(theta) - nu) / (s w sin(theta)).
AuxiliaryState rotating_fixed_point(const StructureConstants& sc, double omega, double theta, double nu, double phi0);

struct AuxiliaryTrajectory {
    std::vector<double> times;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> a_dot;
    std::vector<double> b_dot;
    StepStats stats;

    std::size_t size() const { return times.size(); }
    AuxiliaryState state(std::size_t i) const { return {a[i], b[i]}; }
    AuxiliaryRates rates(std::size_t i) const { return {a_dot[i], b_dot[i]}; }
};

std::vector<double> uniform_grid(double t0, double t1, int nodes);

AuxiliaryTrajectory solve_auxiliary(const HamiltonianModel& model, const AuxiliaryState& init,
                                    const std::vector<double>& grid, double tol);

// Advance the auxiliary state by dt (either sign) from one trajectory node
// with a single classical RK4 step; used for local centered differences.
AuxiliaryState auxiliary_step(const HamiltonianModel& model, double t, const AuxiliaryState& st, double dt);

// max over nodes of ||P (dI/dt + (1/i)[I, H]) P||_F
double invariant_defect(const HamiltonianModel& model, const AuxiliaryTrajectory& traj);

struct SpectrumDrift {
    double drift = 0.0;
    // true when the invariant is not Hermitian and singular values were compared
    bool singular_values = false;
};

SpectrumDrift invariant_spectrum_drift(const AlgebraRealization& r, const AuxiliaryTrajectory& traj);

}  // namespace lrinv
