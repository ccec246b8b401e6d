#include "lrinv/transform.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace lrinv {

Matrix matrix_exponential(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exponential: matrix must be square");
    if (!all_finite(m)) throw NumericalError("matrix_exponential: non-finite input");
    const Eigen::Index dim = m.rows();
    if (dim == 0) return m;

    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
        10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
        960960.0,            16380.0,             182.0,              1.0};
    static constexpr double theta13 = 5.371920351148152;

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (squarings > 1000) throw NumericalError("matrix_exponential: norm too large");

    const Matrix a = m / std::ldexp(1.0, squarings);
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;

    const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    const Matrix u = a * u_inner;
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    if (!all_finite(r)) throw NumericalError("matrix_exponential: overflow");
    return r;
}

GaugeOperator build_gauge(const AlgebraRealization& r, const AuxiliaryState& st) {
    const ClosureConstants cc = closure_constants(r.constants);
    GaugeOperator g;
    g.beta = -0.5 * st.a * cc.x * std::exp(-kI * st.b);
    const Complex beta_tilde = -0.5 * st.a * cc.x * std::exp(kI * st.b);
    g.generator = g.beta * r.A - beta_tilde * r.B;
    g.matrix = matrix_exponential(g.generator);
    g.unitary = r.hermitian_pair && cc.real();
    g.inverse = g.unitary ? Matrix(g.matrix.adjoint()) : matrix_exponential(-g.generator);
    return g;
}

Matrix conjugated_invariant(const GaugeOperator& v, const Matrix& invariant) {
    require_same_shape(v.matrix, invariant, "conjugated_invariant");
    return v.inverse * invariant * v.matrix;
}

double effective_coefficient(const HamiltonianModel& model, double t, const AuxiliaryState& st, double b_dot) {
    const StructureConstants& sc = model.realization.constants;
    const ClosureConstants cc = closure_constants(sc);
    if (!cc.real()) throw std::invalid_argument("effective_coefficient: elliptic algebras only");
    const Coefficients c = model.schedule.at(t);
    const double m = sc.m();
    const double s = cc.s.real();
    return c.omega * (std::cos(st.a) * std::cos(c.theta) + (s / m) * std::sin(st.a) * std::sin(c.theta) * std::cos(st.b - c.phi)) +
           (b_dot / m) * (1.0 - std::cos(st.a));
}

double default_difference_step(const AuxiliaryTrajectory& traj) {
    if (traj.size() < 2) throw std::invalid_argument("default_difference_step: trajectory needs two nodes");
    const double span = traj.times.back() - traj.times.front();
    const double scale = std::max(std::abs(traj.times.front()), std::abs(traj.times.back()));
    return std::max(span * 1e-5, 1e-8 * std::max(1.0, scale));
}

Matrix effective_hamiltonian_numeric(const HamiltonianModel& model, const AuxiliaryTrajectory& traj,
                                     std::size_t node, double dt) {
    if (node >= traj.size()) throw std::out_of_range("effective_hamiltonian_numeric: node out of range");
    const double t = traj.times[node];
    if (!(dt > 0.0) || t - dt < traj.times.front() || t + dt > traj.times.back())
        throw std::out_of_range("effective_hamiltonian_numeric: t +- dt leaves the grid");

    const AuxiliaryState st = traj.state(node);
    const GaugeOperator v = build_gauge(model.realization, st);
    const Matrix v_plus = build_gauge(model.realization, auxiliary_step(model, t, st, dt)).matrix;
    const Matrix v_minus = build_gauge(model.realization, auxiliary_step(model, t, st, -dt)).matrix;
    const Matrix h = hamiltonian_at(model, t);
    return v.inverse * h * v.matrix - kI * v.inverse * (v_plus - v_minus) / (2.0 * dt);
}

}  // namespace lrinv
