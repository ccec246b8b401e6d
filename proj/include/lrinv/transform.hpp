// transform.hpp: invariant-related gauge V(t) = exp(beta A - beta~ B)
//
// beta = -(a/2) x e^{-ib},  beta~ = -(a/2) x e^{ib}  (beta~ = conj(beta) for real x)

#pragma once

#include "lrinv/invariant.hpp"

namespace lrinv {

// exp(M) by scaling and squaring with a degree-13 Pade approximant.
// Throws NumericalError when the input is non-finite or the result overflows.
Matrix matrix_exponential(const Matrix& m);

struct GaugeOperator {
    Matrix generator;  // beta A - beta~ B
    Matrix matrix;     // V
    Matrix inverse;    // V^{-1}; equals V^dagger when unitary
    Complex beta;
    bool unitary = false;
};

GaugeOperator build_gauge(const AlgebraRealization& r, const AuxiliaryState& st);

// V^{-1} I V (V^dagger I V for the unitary case). Equals C under closure.
Matrix conjugated_invariant(const GaugeOperator& v, const Matrix& invariant);

// Scalar h_V multiplying C in V^dagger H V - i V^dagger dV/dt (elliptic case):
//   w [cos a cos(theta) + (s/m) sin a sin(theta) cos(b - phi)] + (b_dot/m)(1 - cos a)
double effective_coefficient(const HamiltonianModel& model, double t, const AuxiliaryState& st, double b_dot);

// (t1 - t0) * 1e-5, floored away from rounding noise.
double default_difference_step(const AuxiliaryTrajectory& traj);

// V^{-1} H V - i V^{-1} (V(t+dt) - V(t-dt)) / (2 dt) at grid node `node`,
// with the neighbouring gauges obtained by local RK4 steps of the auxiliary
// system. Throws std::out_of_range when t +- dt leaves the grid.
Matrix effective_hamiltonian_numeric(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                     std::size_t node, double dt);

}  // namespace lrinv
