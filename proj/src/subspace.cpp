#include "lrinv/subspace.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lrinv {

namespace {

Matrix atom_op(double ee, double eg, double ge, double gg) {
    Matrix m(2, 2);
    m << ee, eg, ge, gg;
    return m;
}

// |e><e| - |g><g|, |e><g|, |g><e| in the (e, g) ordering
const Matrix& sz2() {
    static const Matrix m = atom_op(1, 0, 0, -1);
    return m;
}
const Matrix& sp2() {
    static const Matrix m = atom_op(0, 1, 0, 0);
    return m;
}
const Matrix& sm2() {
    static const Matrix m = atom_op(0, 0, 1, 0);
    return m;
}

Matrix mode_tensor_atom(const Matrix& mode, const Matrix& atom) {
    return Eigen::kroneckerProduct(mode, atom).eval();
}

double falling_ratio(int n, int k) {
    // (n + k)! / n!
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= n + i;
    return v;
}

double inner(const Matrix& x, const Matrix& y) { return (x.adjoint() * y).trace().real(); }

}  // namespace

std::string TwoLevelBosonSpace::label(Eigen::Index i) const {
    return "|" + std::to_string(i / 2) + "," + (i % 2 == 0 ? "e" : "g") + ">";
}

Complex JcSchedules::coupling(double t) const { return g_mod(t) * std::exp(kI * g_arg(t)); }

SusyJCModel build_susy_jc(int k, int n_max, JcSchedules schedules) {
    if (k < 1) throw std::invalid_argument("build_susy_jc: k must be positive");
    if (n_max < k) throw std::invalid_argument("build_susy_jc: n_max must be at least k");

    SusyJCModel model;
    model.k = k;
    model.space.n_max = n_max;
    model.schedules = std::move(schedules);

    const int modes = n_max + 1;
    const Matrix a = annihilation(modes);
    const Matrix ad = a.adjoint();
    const Matrix id_mode = Matrix::Identity(modes, modes);
    const Matrix id_atom = Matrix::Identity(2, 2);

    Matrix ad_k = Matrix::Identity(modes, modes);
    for (int i = 0; i < k; ++i) ad_k = ad_k * ad;

    model.number = mode_tensor_atom(ad * a, id_atom);
    model.sigma_z = mode_tensor_atom(id_mode, sz2());
    const Eigen::Index dim = model.space.dim();
    model.N = model.number + 0.5 * (k - 1) * model.sigma_z + 0.5 * Matrix::Identity(dim, dim);
    model.Q = mode_tensor_atom(ad_k, sm2());
    model.Q_dag = model.Q.adjoint();

    // exact operator values (not truncated products): e-part (n+k)!/n!, g-part n!/(n-k)!
    model.N_prime = Matrix::Zero(dim, dim);
    for (int n = 0; n <= n_max; ++n) {
        model.N_prime(model.space.index(n, Atom::excited), model.space.index(n, Atom::excited)) = falling_ratio(n, k);
        model.N_prime(model.space.index(n, Atom::ground), model.space.index(n, Atom::ground)) =
            n >= k ? falling_ratio(n - k, k) : 0.0;
    }
    return model;
}

double SusyJCModel::detuning(double t) const { return k * schedules.omega(t) - schedules.omega0(t); }

Matrix SusyJCModel::hamiltonian(double t) const {
    const Complex g = schedules.coupling(t);
    return schedules.omega(t) * number + 0.5 * schedules.omega0(t) * sigma_z + g * Q + std::conj(g) * Q_dag;
}

Matrix SusyJCModel::susy_form(double t) const {
    const double w = schedules.omega(t);
    const Complex g = schedules.coupling(t);
    const Eigen::Index dim = space.dim();
    return w * N + 0.5 * (w - detuning(t)) * sigma_z + g * Q + std::conj(g) * Q_dag -
           0.5 * w * Matrix::Identity(dim, dim);
}

StructureConstants fit_structure_constants(const Matrix& a, const Matrix& b, const Matrix& c) {
    const double m = inner(a, commutator(c, a)) / inner(a, a);
    const double n = inner(c, commutator(a, b)) / inner(c, c);
    return {m, n};
}

Matrix restrict_to(const Matrix& full, const std::vector<Eigen::Index>& basis) {
    const auto size = static_cast<Eigen::Index>(basis.size());
    Matrix out(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = 0; j < size; ++j) out(i, j) = full(basis[i], basis[j]);
    return out;
}

BlockDecomposition block_decompose(const SusyJCModel& model) {
    const int k = model.k;
    const int n_max = model.space.n_max;
    const TwoLevelBosonSpace& space = model.space;
    BlockDecomposition out;

    for (int n = 0; n < k; ++n) {
        BlockModel block;
        block.basis = {space.index(n, Atom::ground)};
        block.labels = {space.label(block.basis[0])};
        block.lambda = 0.0;
        const ScalarFunction w = model.schedules.omega;
        const ScalarFunction w0 = model.schedules.omega0;
        block.energy = ScalarFunction::combine(0.0, {{static_cast<double>(n), w}, {-0.5, w0}});
        out.blocks.push_back(std::move(block));
    }

    for (int n = 0; n + k <= n_max; ++n) {
        BlockModel block;
        block.basis = {space.index(n, Atom::excited), space.index(n + k, Atom::ground)};
        block.labels = {space.label(block.basis[0]), space.label(block.basis[1])};
        block.lambda = falling_ratio(n, k);

        AlgebraRealization r;
        r.name = "jc-block";
        r.A = restrict_to(model.Q, block.basis);
        r.B = restrict_to(model.Q_dag, block.basis);
        r.C = -0.5 * restrict_to(model.sigma_z, block.basis);
        r.constants = fit_structure_constants(r.A, r.B, r.C);
        r.hermitian_pair = true;
        r.interior = RealVector::Ones(2);

        // H|block = h0 1 + (k w - w0) C + g A + g* B with h0 = w (n + k/2)
        const JcSchedules& sch = model.schedules;
        const ScalarFunction diagonal = ScalarFunction::combine(0.0, {{static_cast<double>(k), sch.omega}, {-1.0, sch.omega0}});
        const ScalarFunction offset = ScalarFunction::combine(0.0, {{n + 0.5 * k, sch.omega}});
        const Domain dom = sch.g_mod.domain().intersect(sch.g_arg.domain()).intersect(sch.omega.domain());
        auto schedule = CoefficientSchedule::from_generator_coefficients(
            [sch](double t) { return sch.coupling(t); }, diagonal, dom);
        block.model = HamiltonianModel{std::move(r), std::move(schedule), offset};
        out.blocks.push_back(std::move(block));
    }

    for (int n = std::max(0, n_max - k + 1); n <= n_max; ++n) out.excluded.push_back(space.index(n, Atom::excited));
    return out;
}

std::vector<Vector> BlockSolution::propagate(const HamiltonianModel& model, const Vector& psi0) const {
    return evolve_superposition(model, trajectory, psi0);
}

BlockSolution solve_block(const BlockModel& block, const std::vector<double>& grid, const AuxiliaryState& init,
                          double tol) {
    if (!block.two_dimensional() || !block.model) throw std::invalid_argument("solve_block: two-dimensional block required");
    const HamiltonianModel& model = *block.model;
    BlockSolution out;
    out.trajectory = solve_auxiliary(model, init, grid, tol);
    const Matrix v0 = build_gauge(model.realization, out.trajectory.state(0)).matrix;
    for (const auto& pair : c_eigenbasis(model.realization)) {
        EvolutionReport rep = evolve_exact(model, out.trajectory, pair.lambda, pair.vector);
        const auto oracle = oracle_propagate(model, v0 * pair.vector, grid, tol);
        rep.fidelity_vs_oracle = fidelity(rep.states, oracle);
        out.particular.push_back(std::move(rep));
    }
    return out;
}

std::vector<Vector> propagate_by_blocks(const SusyJCModel& model, const BlockDecomposition& blocks, const Vector& psi0,
                                        const std::vector<double>& grid, const AuxiliaryState& init, double tol) {
    const Eigen::Index dim = model.space.dim();
    if (psi0.size() != dim) throw std::invalid_argument("propagate_by_blocks: state dimension mismatch");
    for (Eigen::Index idx : blocks.excluded)
        if (std::abs(psi0(idx)) > 0.0)
            throw std::invalid_argument("propagate_by_blocks: initial state touches the truncation boundary");

    std::vector<Vector> out(grid.size(), Vector::Zero(dim));
    for (const BlockModel& block : blocks.blocks) {
        Vector local(static_cast<Eigen::Index>(block.basis.size()));
        for (std::size_t i = 0; i < block.basis.size(); ++i) local(static_cast<Eigen::Index>(i)) = psi0(block.basis[i]);
        const double weight = local.norm();
        if (weight == 0.0) continue;

        if (!block.two_dimensional()) {
            std::vector<double> energy(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) energy[i] = block.energy(grid[i]);
            const auto phase = cumulative_simpson(grid, energy);
            for (std::size_t i = 0; i < grid.size(); ++i) out[i](block.basis[0]) = std::exp(-kI * phase[i]) * local(0);
            continue;
        }

        const HamiltonianModel& bm = *block.model;
        const AuxiliaryTrajectory traj = solve_auxiliary(bm, init, grid, tol);
        const auto states = evolve_superposition(bm, traj, local / weight);
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = 0; j < block.basis.size(); ++j)
                out[i](block.basis[j]) = weight * states[i](static_cast<Eigen::Index>(j));
    }
    return out;
}

// ---- generalized cavity ------------------------------------------------------

GeneralizedCavityModel build_generalized_cavity(CavityInstance instance, int size, std::vector<ScalarFunction> r_coeffs,
                                                std::vector<ScalarFunction> s_coeffs, ScalarFunction g_mod,
                                                ScalarFunction g_arg) {
    GeneralizedCavityModel model;
    model.instance = instance;
    model.m_a = 1.0;
    switch (instance) {
        case CavityInstance::oscillator: {
            if (size < 1) throw std::invalid_argument("build_generalized_cavity: n_max must be positive");
            const Matrix a = annihilation(size + 1);
            model.A_minus = a;
            model.A_plus = a.adjoint();
            model.A0 = model.A_plus * model.A_minus;
            break;
        }
        case CavityInstance::angular_momentum: {
            if (size < 1) throw std::invalid_argument("build_generalized_cavity: 2l must be positive");
            const AlgebraRealization l = spin_j(0.5 * size);
            model.A0 = l.C;
            model.A_plus = l.A;
            model.A_minus = l.B;
            break;
        }
        default:
            throw std::invalid_argument("build_generalized_cavity: unknown instance");
    }
    model.r_coeffs = std::move(r_coeffs);
    model.s_coeffs = std::move(s_coeffs);
    model.g_mod = std::move(g_mod);
    model.g_arg = std::move(g_arg);
    return model;
}

GeneralizedCavityModel hydrogenlike_model(double l, const ScalarFunction& alpha, const ScalarFunction& beta) {
    const double twice = 2.0 * l;
    if (!(l > 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
        throw std::invalid_argument("hydrogenlike_model: 2l must be a positive integer");
    // beta Lz + (alpha Lz / 2 + beta) sz + (alpha / 2)(L- s+ + L+ s-)
    std::vector<ScalarFunction> r = {ScalarFunction::zero(), beta};
    std::vector<ScalarFunction> s = {beta, ScalarFunction::combine(0.0, {{0.5, alpha}})};
    return build_generalized_cavity(CavityInstance::angular_momentum, static_cast<int>(std::round(twice)), std::move(r),
                                    std::move(s), ScalarFunction::combine(0.0, {{0.5, alpha}}),
                                    TimeFunction::constant(0.0));
}

Matrix GeneralizedCavityModel::hamiltonian(double t) const {
    const Eigen::Index modes = mode_dim();
    auto polynomial = [&](const std::vector<ScalarFunction>& coeffs) {
        Matrix out = Matrix::Zero(modes, modes);
        Matrix power = Matrix::Identity(modes, modes);
        for (const auto& c : coeffs) {
            out += c(t) * power;
            power = power * A0;
        }
        return out;
    };
    const Complex g = g_mod(t) * std::exp(kI * g_arg(t));
    const Matrix id_atom = Matrix::Identity(2, 2);
    return mode_tensor_atom(polynomial(r_coeffs), id_atom) + mode_tensor_atom(polynomial(s_coeffs), sz2()) +
           g * mode_tensor_atom(A_minus, sp2()) + std::conj(g) * mode_tensor_atom(A_plus, sm2());
}

Matrix GeneralizedCavityModel::delta() const {
    const Eigen::Index modes = mode_dim();
    const Matrix id_atom = Matrix::Identity(2, 2);
    return mode_tensor_atom(A0, id_atom) +
           m_a * 0.5 * (Matrix::Identity(dim(), dim()) + mode_tensor_atom(Matrix::Identity(modes, modes), sz2()));
}

std::vector<DeltaBlock> delta_blocks(const GeneralizedCavityModel& model) {
    const Matrix d = model.delta();
    std::map<long long, DeltaBlock> groups;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        const double value = d(i, i).real();
        const auto key = static_cast<long long>(std::llround(value * 2.0));
        auto& block = groups[key];
        block.delta = value;
        block.basis.push_back(i);
    }
    std::vector<DeltaBlock> out;
    for (auto& [key, block] : groups) {
        // excited member first
        std::sort(block.basis.begin(), block.basis.end(), [](Eigen::Index x, Eigen::Index y) { return x % 2 < y % 2; });
        out.push_back(std::move(block));
    }
    return out;
}

SigmaOperators sigma_block_operators(const GeneralizedCavityModel& model, double delta_eigenvalue) {
    const auto blocks = delta_blocks(model);
    auto it = std::find_if(blocks.begin(), blocks.end(),
                           [&](const DeltaBlock& b) { return std::abs(b.delta - delta_eigenvalue) < 1e-9; });
    if (it == blocks.end()) throw std::invalid_argument("sigma_block_operators: no block with this Delta eigenvalue");
    if (it->basis.size() != 2) throw std::invalid_argument("sigma_block_operators: block is one-dimensional");

    const Eigen::Index lower = it->basis[1];  // |nu, g>
    const Eigen::Index mode = lower / 2;
    const Matrix apam = model.A_plus * model.A_minus;
    SigmaOperators out;
    out.chi = apam(mode, mode).real();
    if (!(out.chi > 0.0)) throw std::invalid_argument("sigma_block_operators: chi vanishes on this block");

    const Matrix minus_plus = mode_tensor_atom(model.A_minus, sp2());
    const Matrix plus_minus = mode_tensor_atom(model.A_plus, sm2());
    const double scale = 1.0 / (2.0 * std::sqrt(out.chi));
    out.s1 = scale * restrict_to(minus_plus + plus_minus, it->basis);
    out.s2 = scale * kI * restrict_to(plus_minus - minus_plus, it->basis);
    const Eigen::Index modes = model.mode_dim();
    out.s3 = 0.5 * restrict_to(mode_tensor_atom(Matrix::Identity(modes, modes), sz2()), it->basis);
    return out;
}

}  // namespace lrinv
