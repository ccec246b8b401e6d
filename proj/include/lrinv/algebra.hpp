// algebra.hpp: finite matrix realizations of generator triples (A, B, C)
//
// Every realization obeys
//     [A, B] = n C,   [C, A] = m A,   [C, B] = -m B
// either exactly or on the interior of a truncated Fock basis.

#pragma once

#include "lrinv/linalg.hpp"

#include <algorithm>
#include <string>

namespace lrinv {

class StructureConstants {
public:
    StructureConstants(double m, double n);

    double m() const { return m_; }
    double n() const { return n_; }
    bool elliptic() const { return m_ * n_ > 0.0; }
    bool hyperbolic() const { return m_ * n_ < 0.0; }

private:
    double m_;
    double n_;
};

struct AlgebraRealization {
    std::string name;
    Matrix A;
    Matrix B;
    Matrix C;
    StructureConstants constants{1.0, 2.0};
    // B == A^dagger and C == C^dagger
    bool hermitian_pair = false;
    // 1 on basis rows untouched by truncation, 0 on the boundary rows.
    RealVector interior;
    // Identity-proportional constant carried by the realization (Schwinger N).
    double conserved_scalar = 0.0;

    Eigen::Index dim() const { return C.rows(); }
    bool exact() const { return interior.minCoeff() > 0.5; }
};

struct ClosureReport {
    double ab = 0.0;  // ||P([A,B] - nC)P||
    double ca = 0.0;  // ||P([C,A] - mA)P||
    double cb = 0.0;  // ||P([C,B] + mB)P||
    bool pass = false;

    double max() const { return std::max(ab, std::max(ca, cb)); }
};

ClosureReport verify_realization(const AlgebraRealization& r, double tol);
ClosureReport verify_realization(const AlgebraRealization& r, double tol, const RealVector& projector);

// Standard spin-j ladders, basis ordered m = j, j-1, ..., -j. (m, n) = (1, 2).
AlgebraRealization spin_j(double j);

// Fixed-total-number block of the two-mode Schwinger realization,
// basis |N - n2, n2> with n2 ascending (same ordering as spin_j).
AlgebraRealization schwinger_su2(int n_total);

// Positive discrete series of su(1,1): K3 = diag(k + p), p = 0..dim-1.
AlgebraRealization su11_discrete(double k, int dim);

// q^2, p^2, i(qp + pq) on a truncated Fock basis. (m, n) = (4, 2).
AlgebraRealization gho_realization(int dim);

// |1><2|, |2><1|, |1><1| - |2><2|. (m, n) = (2, 1).
AlgebraRealization two_level_realization();

// Truncated single-mode annihilation operator on Fock states 0..dim-1.
Matrix annihilation(int dim);

}  // namespace lrinv
