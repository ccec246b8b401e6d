#include "lrinv/invariant.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrinv {

ClosureConstants closure_constants(const StructureConstants& sc) {
    const double m = sc.m();
    const double n = sc.n();
    const Complex s = std::sqrt(Complex(0.5 * m * n, 0.0));
    ClosureConstants cc{m / s, 1.0 / s, s};
    // the two auxiliary equations are compatible only for y^2 = 2m/n
    const double target = 2.0 * m / n;
    if (std::abs(cc.y * cc.y - target) > 1e-12 * std::max(1.0, std::abs(target)))
        throw std::logic_error("closure_constants: y^2 != 2m/n");
    return cc;
}

Matrix invariant_at(const AlgebraRealization& r, const AuxiliaryState& st) {
    const Complex y = closure_constants(r.constants).y;
    const Complex ladder = 0.5 * y * std::sin(st.a);
    return ladder * std::exp(-kI * st.b) * r.A + ladder * std::exp(kI * st.b) * r.B + std::cos(st.a) * r.C;
}

Matrix invariant_rate(const AlgebraRealization& r, const AuxiliaryState& st, const AuxiliaryRates& rates) {
    const Complex y = closure_constants(r.constants).y;
    const double ca = std::cos(st.a);
    const double sa = std::sin(st.a);
    const Complex da = 0.5 * y * std::exp(-kI * st.b) * (rates.a_dot * ca - kI * rates.b_dot * sa);
    const Complex db = 0.5 * y * std::exp(kI * st.b) * (rates.a_dot * ca + kI * rates.b_dot * sa);
    return da * r.A + db * r.B - rates.a_dot * sa * r.C;
}

AuxiliaryRates auxiliary_rhs(const StructureConstants& sc, const Coefficients& c, const AuxiliaryState& st) {
    const ClosureConstants cc = closure_constants(sc);
    const double m = sc.m();
    const double n = sc.n();
    const double sin_theta = std::sin(c.theta);
    const double delta = st.b - c.phi;

    const Complex a_dot = -0.5 * n * cc.y * c.omega * sin_theta * std::sin(delta);

    // Imaginary part of the first complex equation, divided by y e^{-ib} sin a.
    Complex b_dot;
    const double sa = std::sin(st.a);
    if (std::abs(sa) < kSingularEpsilon) {
        if (std::abs(sin_theta) >= kSingularEpsilon && c.omega != 0.0)
            throw SingularityError("auxiliary angle a reached a pole (|sin a| < 1e-10) under transverse drive");
        // no transverse drive: b is pure gauge; continue the off-pole rate
        b_dot = m * c.omega * std::cos(c.theta);
    } else {
        b_dot = m * c.omega * std::cos(c.theta) - (m / cc.y) * c.omega * (std::cos(st.a) / sa) * sin_theta * std::cos(delta);
    }

    auto real_or_throw = [](Complex v) {
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
            throw NumericalError("hyperbolic algebra: auxiliary rates leave the real (a, b) section");
        return v.real();
    };
    return {real_or_throw(a_dot), real_or_throw(b_dot)};
}

AuxiliaryResidual auxiliary_residual(const StructureConstants& sc, const Coefficients& c, const AuxiliaryState& st,
                                     const AuxiliaryRates& rates) {
    const ClosureConstants cc = closure_constants(sc);
    const double m = sc.m();
    const double n = sc.n();
    const double ca = std::cos(st.a);
    const double sa = std::sin(st.a);
    const double sin_theta = std::sin(c.theta);
    const Complex eb = std::exp(-kI * st.b);
    const Complex first = cc.y * eb * (rates.a_dot * ca - kI * rates.b_dot * sa) -
                          kI * m * c.omega * (std::exp(-kI * c.phi) * ca * sin_theta - cc.y * eb * sa * std::cos(c.theta));
    const Complex second = rates.a_dot + 0.5 * n * cc.y * c.omega * sin_theta * std::sin(st.b - c.phi);
    return {std::abs(first), std::abs(second)};
}

AuxiliaryState aligned_state(const StructureConstants& sc, const Coefficients& c) {
    const ClosureConstants cc = closure_constants(sc);
    if (!cc.real()) throw std::invalid_argument("aligned_state: requires an elliptic algebra");
    return {std::atan2(std::sin(c.theta), cc.y.real() * std::cos(c.theta)), c.phi};
}

AuxiliaryState rotating_fixed_point(const StructureConstants& sc, double omega, double theta, double nu, double phi0) {
    const ClosureConstants cc = closure_constants(sc);
    if (!cc.real()) throw std::invalid_argument("rotating_fixed_point: requires an elliptic algebra");
    const double s = cc.s.real();
    return {std::atan2(s * omega * std::sin(theta), sc.m() * omega * std::cos(theta) - nu), phi0};
}

std::vector<double> uniform_grid(double t0, double t1, int nodes) {
    if (nodes < 2 || !(t1 > t0)) throw std::invalid_argument("uniform_grid: need t1 > t0 and at least two nodes");
    std::vector<double> grid(static_cast<std::size_t>(nodes));
    const double h = (t1 - t0) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) grid[static_cast<std::size_t>(i)] = t0 + h * i;
    grid.back() = t1;
    return grid;
}

namespace {

using Angles = Eigen::Vector2d;

Angles rhs_vector(const HamiltonianModel& model, double t, const Angles& y) {
    const AuxiliaryRates r = auxiliary_rhs(model.realization.constants, model.schedule.at(t), {y(0), y(1)});
    return {r.a_dot, r.b_dot};
}

}  // namespace

AuxiliaryTrajectory solve_auxiliary(const HamiltonianModel& model, const AuxiliaryState& init,
                                    const std::vector<double>& grid, double tol) {
    if (grid.empty()) throw std::invalid_argument("solve_auxiliary: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("solve_auxiliary: grid must be strictly increasing");
    const Domain dom = model.domain();
    if (!dom.contains(grid.front()) || !dom.contains(grid.back()))
        throw std::domain_error("solve_auxiliary: grid outside the schedule domain");
    if (!std::isfinite(init.a) || !std::isfinite(init.b)) throw std::invalid_argument("solve_auxiliary: non-finite initial state");

    DormandPrince<2> stepper([&model](double t, const Angles& y) { return rhs_vector(model, t, y); }, tol);

    AuxiliaryTrajectory traj;
    traj.times = grid;
    Angles y(init.a, init.b);
    double h = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) y = stepper.integrate(grid[i - 1], grid[i], y, h, traj.stats);
        const AuxiliaryRates r = auxiliary_rhs(model.realization.constants, model.schedule.at(grid[i]), {y(0), y(1)});
        traj.a.push_back(y(0));
        traj.b.push_back(y(1));
        traj.a_dot.push_back(r.a_dot);
        traj.b_dot.push_back(r.b_dot);
    }
    return traj;
}

AuxiliaryState auxiliary_step(const HamiltonianModel& model, double t, const AuxiliaryState& st, double dt) {
    const Angles y(st.a, st.b);
    const Angles k1 = rhs_vector(model, t, y);
    const Angles k2 = rhs_vector(model, t + 0.5 * dt, y + 0.5 * dt * k1);
    const Angles k3 = rhs_vector(model, t + 0.5 * dt, y + 0.5 * dt * k2);
    const Angles k4 = rhs_vector(model, t + dt, y + dt * k3);
    const Angles out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return {out(0), out(1)};
}

double invariant_defect(const HamiltonianModel& model, const AuxiliaryTrajectory& traj) {
    const AlgebraRealization& r = model.realization;
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Matrix inv = invariant_at(r, traj.state(i));
        const Matrix rate = invariant_rate(r, traj.state(i), traj.rates(i));
        const Matrix h = hamiltonian_at(model, traj.times[i]);
        worst = std::max(worst, projected_norm(rate - kI * commutator(inv, h), r.interior));
    }
    return worst;
}

SpectrumDrift invariant_spectrum_drift(const AlgebraRealization& r, const AuxiliaryTrajectory& traj) {
    SpectrumDrift out;
    out.singular_values = !(r.hermitian_pair && closure_constants(r.constants).real());
    auto spectrum = [&](std::size_t i) -> RealVector {
        const Matrix inv = invariant_at(r, traj.state(i));
        if (out.singular_values) return Eigen::JacobiSVD<Matrix>(inv).singularValues();
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inv + inv.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    };
    if (traj.size() == 0) return out;
    const RealVector first = spectrum(0);
    for (std::size_t i = 1; i < traj.size(); ++i)
        out.drift = std::max(out.drift, (spectrum(i) - first).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace lrinv
