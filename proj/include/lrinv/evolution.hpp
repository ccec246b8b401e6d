// evolution.hpp: phase bookkeeping, exact particular solutions and the brute-force oracle
//
// Particular solution for an eigenvalue lambda of C:
//   psi(t) = exp(-i (phi_d + phi_g + scalar_phase)) V(t) |lambda>
// Phases are accumulated as raw real quadratures and never reduced mod 2 pi.

#pragma once

#include "lrinv/transform.hpp"

#include <functional>
#include <vector>

namespace lrinv {

struct PhaseBreakdown {
    double phi_d = 0.0;
    double phi_g = 0.0;
    double phi_total = 0.0;
    double scalar_phase = 0.0;
};

struct PhaseRates {
    double dynamical = 0.0;
    double geometric = 0.0;
};

PhaseRates phase_integrands(const HamiltonianModel& model, double t, const AuxiliaryState& st,
                            const AuxiliaryRates& rates, double lambda);

// Running integral of samples on a uniform grid: composite Simpson on panel
// pairs, with a three-point end correction for odd nodes. Needs >= 3 nodes.
std::vector<double> cumulative_simpson(const std::vector<double>& times, const std::vector<double>& values);

std::vector<PhaseBreakdown> accumulate_phases(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                              double lambda);

// (lambda/m) 2 pi (1 - cos a) per cycle: the flux of a monopole of strength
// lambda/(4 pi m) through the cap swept by the invariant axis.
double cyclic_geometric_phase(double a, double lambda, double m, int cycles);

struct EvolutionReport {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<PhaseBreakdown> phases;
    double lambda = 0.0;
    double defect = 0.0;
    std::vector<double> fidelity_vs_oracle;
};

struct Eigenpair {
    double lambda;
    Vector vector;
};

// Eigenpairs of C (Hermitian realizations), eigenvalues descending.
std::vector<Eigenpair> c_eigenbasis(const AlgebraRealization& r);

// eigvec must satisfy C eigvec = lambda eigvec and be normalized.
EvolutionReport evolve_exact(const HamiltonianModel& model, const AuxiliaryTrajectory& traj, double lambda,
                             const Vector& eigvec);

// Linear combination of particular solutions matching psi0 at the first node.
// Requires a nondegenerate C spectrum.
std::vector<Vector> evolve_superposition(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                         const Vector& psi0);

// Direct adaptive integration of i dpsi/dt = H(t) psi (Runge-Kutta-Fehlberg
// 7(8)), sampled on the grid. The norm is monitored, never renormalized.
std::vector<Vector> oracle_propagate(const HamiltonianModel& model, const Vector& psi0,
                                     const std::vector<double>& grid, double tol);
// Same integrator for any H(t); the norm check applies when monitor_norm is set.
std::vector<Vector> oracle_propagate(const std::function<Matrix(double)>& hamiltonian, const Vector& psi0,
                                     const std::vector<double>& grid, double tol, bool monitor_norm);

std::vector<double> fidelity(const std::vector<Vector>& a, const std::vector<Vector>& b);

// Running integral of <lambda,t| H - i d/dt |lambda,t> with |lambda,t> = V(t) eigvec,
// d/dt by finite differences of the gauge (centered inside, one-sided at the ends).
// H here is the three-generator part; the identity channel is reported separately.
std::vector<double> lr_phase(const HamiltonianModel& model, const AuxiliaryTrajectory& traj, const Vector& eigvec);

}  // namespace lrinv
