// subspace.hpp: models without a global quasialgebra, solved blockwise
//
// Supersymmetric k-photon Jaynes-Cummings:
//   H(t) = w a^dag a + (w0/2) sz + g (a^dag)^k s- + g* a^k s+
// commutes with N' = diag(a^k (a^dag)^k, (a^dag)^k a^k); each two-dimensional
// N' eigenspace {|n,e>, |n+k,g>} carries the three-generator triple
//   A = Q|_block, B = Q^dag|_block, C = -sz/2|_block,  (m, n) = (1, 2 lambda).
//
// Generalized cavity:
//   H = r(A0) + s(A0) sz + g A- s+ + g* A+ s-,  [A0, A+-] = +-m_A A+-
// commutes with Delta = A0 + m_A (1 + sz)/2.
//
// Basis ordering everywhere: mode index ascending, atom index fastest, e before g.

#pragma once

#include "lrinv/evolution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lrinv {

enum class Atom { excited = 0, ground = 1 };

struct TwoLevelBosonSpace {
    int n_max = 0;

    Eigen::Index dim() const { return 2 * (n_max + 1); }
    Eigen::Index index(int n, Atom atom) const { return 2 * n + static_cast<int>(atom); }
    std::string label(Eigen::Index i) const;
};

struct JcSchedules {
    ScalarFunction omega;   // field frequency
    ScalarFunction omega0;  // atomic transition frequency
    ScalarFunction g_mod;
    ScalarFunction g_arg;

    Complex coupling(double t) const;
};

struct SusyJCModel {
    int k = 1;
    TwoLevelBosonSpace space;
    JcSchedules schedules;

    Matrix number;       // a^dag a (x) 1
    Matrix sigma_z;      // 1 (x) sz
    Matrix N;            // a^dag a + (k-1)/2 sz + 1/2
    Matrix Q;            // (a^dag)^k s-
    Matrix Q_dag;        // a^k s+
    Matrix N_prime;      // conserved supersymmetric generator

    Matrix hamiltonian(double t) const;
    // w N + (w - delta)/2 sz + g Q + g* Q^dag - w/2 with delta = k w - w0
    Matrix susy_form(double t) const;
    double detuning(double t) const;
};

SusyJCModel build_susy_jc(int k, int n_max, JcSchedules schedules);

struct BlockModel {
    std::vector<Eigen::Index> basis;  // full-space indices, (|n,e>, |n+k,g>) for pairs
    std::vector<std::string> labels;
    double lambda = 0.0;              // N' eigenvalue
    // two-dimensional blocks only: effective three-generator model
    std::optional<HamiltonianModel> model;
    // one-dimensional blocks only: the diagonal energy
    ScalarFunction energy;

    bool two_dimensional() const { return basis.size() == 2; }
    const StructureConstants& constants() const { return model->realization.constants; }
};

struct BlockDecomposition {
    std::vector<BlockModel> blocks;
    std::vector<Eigen::Index> excluded;  // boundary states |n,e> with n + k > n_max
};

// Effective (m, n) of a restricted triple from explicit commutators
// (Frobenius projections of [C,A] onto A and [A,B] onto C).
StructureConstants fit_structure_constants(const Matrix& a, const Matrix& b, const Matrix& c);

BlockDecomposition block_decompose(const SusyJCModel& model);

// Restriction P^dag X P of a full-space operator to a block basis.
Matrix restrict_to(const Matrix& full, const std::vector<Eigen::Index>& basis);

struct BlockSolution {
    AuxiliaryTrajectory trajectory;
    std::vector<EvolutionReport> particular;  // one per C eigenvalue, oracle fidelity filled

    // Block-local evolution of an arbitrary initial block state.
    std::vector<Vector> propagate(const HamiltonianModel& model, const Vector& psi0) const;
};

BlockSolution solve_block(const BlockModel& block, const std::vector<double>& grid, const AuxiliaryState& init,
                          double tol);

// Propagates a full-space state block by block (every block uses `init` for
// its auxiliary angles) and reassembles it. The state must vanish on the
// excluded boundary states.
std::vector<Vector> propagate_by_blocks(const SusyJCModel& model, const BlockDecomposition& blocks,
                                        const Vector& psi0, const std::vector<double>& grid,
                                        const AuxiliaryState& init, double tol);

// ---- generalized cavity ------------------------------------------------------

enum class CavityInstance { oscillator, angular_momentum };

struct GeneralizedCavityModel {
    CavityInstance instance = CavityInstance::oscillator;
    double m_a = 1.0;
    Matrix A0;       // mode space
    Matrix A_plus;
    Matrix A_minus;
    std::vector<ScalarFunction> r_coeffs;  // r(A0) = sum_k r_k(t) A0^k
    std::vector<ScalarFunction> s_coeffs;
    ScalarFunction g_mod;
    ScalarFunction g_arg;

    Eigen::Index mode_dim() const { return A0.rows(); }
    Eigen::Index dim() const { return 2 * A0.rows(); }
    Matrix hamiltonian(double t) const;
    Matrix delta() const;
};

// `size` is n_max for the oscillator and 2l for the angular-momentum instance.
GeneralizedCavityModel build_generalized_cavity(CavityInstance instance, int size,
                                                std::vector<ScalarFunction> r_coeffs,
                                                std::vector<ScalarFunction> s_coeffs, ScalarFunction g_mod,
                                                ScalarFunction g_arg);

// alpha L.S + beta (Lz + 2 Sz) at fixed orbital l (integer or half-integer).
GeneralizedCavityModel hydrogenlike_model(double l, const ScalarFunction& alpha, const ScalarFunction& beta);

struct DeltaBlock {
    double delta = 0.0;
    std::vector<Eigen::Index> basis;  // (upper |.,e>, lower |.,g>) for pairs
};

std::vector<DeltaBlock> delta_blocks(const GeneralizedCavityModel& model);

struct SigmaOperators {
    Matrix s1;
    Matrix s2;
    Matrix s3;
    double chi = 0.0;
};

// Sigma operators on the two-dimensional Delta block with the given
// eigenvalue; chi = <n|A+ A-|n> on the lower (sz = -1) member.
SigmaOperators sigma_block_operators(const GeneralizedCavityModel& model, double delta_eigenvalue);

}  // namespace lrinv
