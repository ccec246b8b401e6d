#include "lrinv/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <stdexcept>

namespace lrinv {

namespace {

void require_elliptic_hermitian(const AlgebraRealization& r, const char* where) {
    if (!r.hermitian_pair || !closure_constants(r.constants).real())
        throw std::invalid_argument(std::string(where) + ": requires an elliptic hermitian_pair realization");
}

void require_uniform(const std::vector<double>& times) {
    if (times.size() < 3) throw std::invalid_argument("grid too coarse: at least three nodes required");
    const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(h > 0.0)) throw std::invalid_argument("grid must be increasing");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * std::max(h, 1.0))
            throw std::invalid_argument("phase quadrature requires a uniform grid");
}

}  // namespace

PhaseRates phase_integrands(const HamiltonianModel& model, double t, const AuxiliaryState& st,
                            const AuxiliaryRates& rates, double lambda) {
    const StructureConstants& sc = model.realization.constants;
    const ClosureConstants cc = closure_constants(sc);
    if (!cc.real()) throw std::invalid_argument("phase_integrands: elliptic algebras only");
    const Coefficients c = model.schedule.at(t);
    const double m = sc.m();
    const double s = cc.s.real();
    PhaseRates out;
    out.dynamical = lambda * c.omega *
                    (std::cos(st.a) * std::cos(c.theta) + (s / m) * std::sin(st.a) * std::sin(c.theta) * std::cos(st.b - c.phi));
    out.geometric = lambda * (rates.b_dot / m) * (1.0 - std::cos(st.a));
    return out;
}

std::vector<double> cumulative_simpson(const std::vector<double>& times, const std::vector<double>& values) {
    require_uniform(times);
    if (values.size() != times.size()) throw std::invalid_argument("cumulative_simpson: size mismatch");
    const std::size_t count = times.size();
    const double h = (times.back() - times.front()) / static_cast<double>(count - 1);
    std::vector<double> out(count, 0.0);
    for (std::size_t j = 2; j < count; j += 2)
        out[j] = out[j - 2] + h / 3.0 * (values[j - 2] + 4.0 * values[j - 1] + values[j]);
    for (std::size_t j = 1; j < count; j += 2) {
        if (j + 1 < count)
            out[j] = out[j - 1] + h / 12.0 * (5.0 * values[j - 1] + 8.0 * values[j] - values[j + 1]);
        else
            out[j] = out[j - 1] + h / 12.0 * (-values[j - 2] + 8.0 * values[j - 1] + 5.0 * values[j]);
    }
    return out;
}

std::vector<PhaseBreakdown> accumulate_phases(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                              double lambda) {
    const std::size_t count = traj.size();
    std::vector<double> dyn(count), geo(count), offset(count);
    for (std::size_t i = 0; i < count; ++i) {
        const PhaseRates r = phase_integrands(model, traj.times[i], traj.state(i), traj.rates(i), lambda);
        dyn[i] = r.dynamical;
        geo[i] = r.geometric;
        offset[i] = model.scalar_offset(traj.times[i]);
    }
    const auto phi_d = cumulative_simpson(traj.times, dyn);
    const auto phi_g = cumulative_simpson(traj.times, geo);
    const auto scalar = cumulative_simpson(traj.times, offset);
    std::vector<PhaseBreakdown> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = {phi_d[i], phi_g[i], phi_d[i] + phi_g[i], scalar[i]};
    return out;
}

double cyclic_geometric_phase(double a, double lambda, double m, int cycles) {
    return (lambda / m) * 2.0 * kPi * (1.0 - std::cos(a)) * cycles;
}

std::vector<Eigenpair> c_eigenbasis(const AlgebraRealization& r) {
    if (hermiticity_defect(r.C) > 1e-12 * std::max(1.0, r.C.norm()))
        throw std::invalid_argument("c_eigenbasis: C is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.C);
    std::vector<Eigenpair> out;
    for (Eigen::Index k = r.dim() - 1; k >= 0; --k) out.push_back({es.eigenvalues()(k), es.eigenvectors().col(k)});
    return out;
}

EvolutionReport evolve_exact(const HamiltonianModel& model, const AuxiliaryTrajectory& traj, double lambda,
                             const Vector& eigvec) {
    const AlgebraRealization& r = model.realization;
    require_elliptic_hermitian(r, "evolve_exact");
    if (eigvec.size() != r.dim()) throw std::invalid_argument("evolve_exact: eigenvector dimension mismatch");
    if (std::abs(eigvec.norm() - 1.0) > 1e-10) throw std::invalid_argument("evolve_exact: eigenvector must be normalized");
    if ((r.C * eigvec - lambda * eigvec).norm() > 1e-10)
        throw std::invalid_argument("evolve_exact: vector is not an eigenvector of C for this lambda");

    EvolutionReport rep;
    rep.times = traj.times;
    rep.lambda = lambda;
    rep.phases = accumulate_phases(model, traj, lambda);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseBreakdown& p = rep.phases[i];
        const Matrix v = build_gauge(r, traj.state(i)).matrix;
        rep.states.push_back(std::exp(-kI * (p.phi_total + p.scalar_phase)) * (v * eigvec));
    }
    rep.defect = invariant_defect(model, traj);
    return rep;
}

std::vector<Vector> evolve_superposition(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                         const Vector& psi0) {
    const AlgebraRealization& r = model.realization;
    require_elliptic_hermitian(r, "evolve_superposition");
    const auto basis = c_eigenbasis(r);
    for (std::size_t k = 1; k < basis.size(); ++k)
        if (std::abs(basis[k].lambda - basis[k - 1].lambda) < 1e-9)
            throw std::invalid_argument("evolve_superposition: degenerate C spectrum; supply eigenvectors explicitly");

    const Matrix v0 = build_gauge(r, traj.state(0)).matrix;
    std::vector<Vector> out(traj.size(), Vector::Zero(r.dim()));
    for (const auto& pair : basis) {
        const Complex weight = (v0 * pair.vector).dot(psi0);
        if (std::abs(weight) == 0.0) continue;
        const EvolutionReport part = evolve_exact(model, traj, pair.lambda, pair.vector);
        for (std::size_t i = 0; i < traj.size(); ++i) out[i] += weight * part.states[i];
    }
    return out;
}

std::vector<Vector> oracle_propagate(const HamiltonianModel& model, const Vector& psi0, const std::vector<double>& grid,
                                     double tol) {
    if (psi0.size() != model.realization.dim()) throw std::invalid_argument("oracle_propagate: state dimension mismatch");
    return oracle_propagate([&model](double t) { return hamiltonian_at(model, t); }, psi0, grid, tol,
                            model.realization.hermitian_pair);
}

std::vector<Vector> oracle_propagate(const std::function<Matrix(double)>& hamiltonian, const Vector& psi0,
                                     const std::vector<double>& grid, double tol, bool monitor_norm) {
    namespace odeint = boost::numeric::odeint;
    using State = std::vector<Complex>;

    const Eigen::Index dim = psi0.size();
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("oracle_propagate: psi0 must be normalized");
    if (grid.empty()) throw std::invalid_argument("oracle_propagate: empty grid");

    auto rhs = [&hamiltonian, dim](const State& x, State& dxdt, double t) {
        const Matrix h = hamiltonian(t);
        if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("oracle_propagate: state dimension mismatch");
        Eigen::Map<const Vector> psi(x.data(), dim);
        Eigen::Map<Vector> out(dxdt.data(), dim);
        out.noalias() = -kI * (h * psi);
    };

    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    State x(psi0.data(), psi0.data() + dim);
    std::vector<Vector> out;
    out.push_back(psi0);
    double dt = grid.size() > 1 ? (grid[1] - grid[0]) * 0.1 : 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        try {
            odeint::integrate_adaptive(stepper, rhs, x, grid[i - 1], grid[i], dt);
        } catch (const odeint::step_adjustment_error& e) {
            throw NumericalError(std::string("oracle_propagate: ") + e.what());
        } catch (const odeint::no_progress_error& e) {
            throw NumericalError(std::string("oracle_propagate: ") + e.what());
        }
        Vector psi = Eigen::Map<const Vector>(x.data(), dim);
        if (!psi.allFinite()) throw NumericalError("oracle_propagate: non-finite state");
        if (monitor_norm && std::abs(psi.norm() - 1.0) > 1e-9)
            throw NumericalError("oracle_propagate: norm drift exceeded 1e-9");
        out.push_back(std::move(psi));
    }
    return out;
}

std::vector<double> fidelity(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("fidelity: stream lengths differ");
    std::vector<double> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) throw std::invalid_argument("fidelity: state dimensions differ");
        out.push_back(std::abs(a[i].dot(b[i])));
    }
    return out;
}

std::vector<double> lr_phase(const HamiltonianModel& model, const AuxiliaryTrajectory& traj, const Vector& eigvec) {
    const AlgebraRealization& r = model.realization;
    require_elliptic_hermitian(r, "lr_phase");
    require_uniform(traj.times);
    const double dt = default_difference_step(traj);
    const std::size_t last = traj.size() - 1;

    auto state_at = [&](std::size_t node, double shift) -> Vector {
        const AuxiliaryState st =
            shift == 0.0 ? traj.state(node) : auxiliary_step(model, traj.times[node], traj.state(node), shift);
        return build_gauge(r, st).matrix * eigvec;
    };

    std::vector<double> integrand(traj.size());
    for (std::size_t i = 0; i <= last; ++i) {
        const Vector psi = state_at(i, 0.0);
        Vector dpsi;
        if (i == 0)
            dpsi = (-3.0 * psi + 4.0 * state_at(i, dt) - state_at(i, 2.0 * dt)) / (2.0 * dt);
        else if (i == last)
            dpsi = (3.0 * psi - 4.0 * state_at(i, -dt) + state_at(i, -2.0 * dt)) / (2.0 * dt);
        else
            dpsi = (state_at(i, dt) - state_at(i, -dt)) / (2.0 * dt);
        const Matrix h = generator_hamiltonian(r, model.schedule.at(traj.times[i]));
        integrand[i] = (psi.dot(h * psi) - kI * psi.dot(dpsi)).real();
    }
    return cumulative_simpson(traj.times, integrand);
}

}  // namespace lrinv
