#include "lrinv/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace lrinv {

StructureConstants::StructureConstants(double m, double n) : m_(m), n_(n) {
    if (m == 0.0 || n == 0.0 || !std::isfinite(m) || !std::isfinite(n))
        throw std::invalid_argument("StructureConstants: m and n must be finite and nonzero");
}

ClosureReport verify_realization(const AlgebraRealization& r, double tol) {
    return verify_realization(r, tol, r.interior);
}

ClosureReport verify_realization(const AlgebraRealization& r, double tol, const RealVector& projector) {
    const double m = r.constants.m();
    const double n = r.constants.n();
    ClosureReport rep;
    rep.ab = projected_norm(commutator(r.A, r.B) - n * r.C, projector);
    rep.ca = projected_norm(commutator(r.C, r.A) - m * r.A, projector);
    rep.cb = projected_norm(commutator(r.C, r.B) + m * r.B, projector);
    rep.pass = rep.ab < tol && rep.ca < tol && rep.cb < tol;
    return rep;
}

Matrix annihilation(int dim) {
    if (dim < 1) throw std::invalid_argument("annihilation: dim must be positive");
    Matrix a = Matrix::Zero(dim, dim);
    for (int p = 1; p < dim; ++p) a(p - 1, p) = std::sqrt(static_cast<double>(p));
    return a;
}

AlgebraRealization spin_j(double j) {
    const double twice = 2.0 * j;
    if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
        throw std::invalid_argument("spin_j: 2j must be a positive integer");
    const int dim = static_cast<int>(std::round(twice)) + 1;

    AlgebraRealization r;
    r.name = "spin";
    r.C = Matrix::Zero(dim, dim);
    r.A = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double mz = j - k;
        r.C(k, k) = mz;
        // J+ |j, mz> = sqrt(j(j+1) - mz(mz+1)) |j, mz+1>, and mz+1 sits at row k-1
        if (k > 0) r.A(k - 1, k) = std::sqrt(j * (j + 1.0) - mz * (mz + 1.0));
    }
    r.B = r.A.adjoint();
    r.constants = StructureConstants(1.0, 2.0);
    r.hermitian_pair = true;
    r.interior = RealVector::Ones(dim);
    return r;
}

AlgebraRealization schwinger_su2(int n_total) {
    if (n_total < 0) throw std::invalid_argument("schwinger_su2: N_total must be nonnegative");
    const int dim = n_total + 1;

    // Basis index i <-> |n1 = N - i, n2 = i>, i.e. mode-2 Fock index ascending.
    AlgebraRealization r;
    r.name = "schwinger";
    r.A = Matrix::Zero(dim, dim);
    r.C = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double n1 = n_total - i;
        const double n2 = i;
        r.C(i, i) = 0.5 * (n1 - n2);
        // a1^dag a2 |n1, n2> = sqrt((n1 + 1) n2) |n1 + 1, n2 - 1>
        if (i > 0) r.A(i - 1, i) = std::sqrt((n1 + 1.0) * n2);
    }
    r.B = r.A.adjoint();
    r.constants = StructureConstants(1.0, 2.0);
    r.hermitian_pair = true;
    r.interior = RealVector::Ones(dim);
    r.conserved_scalar = 0.5 * n_total;
    return r;
}

AlgebraRealization su11_discrete(double k, int dim) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("su11_discrete: k must be positive");
    if (dim < 2) throw std::invalid_argument("su11_discrete: dim must be at least 2");

    AlgebraRealization r;
    r.name = "su11";
    r.A = Matrix::Zero(dim, dim);
    r.C = Matrix::Zero(dim, dim);
    for (int p = 0; p < dim; ++p) {
        r.C(p, p) = k + p;
        if (p + 1 < dim) r.A(p + 1, p) = std::sqrt((p + 1.0) * (2.0 * k + p));
    }
    r.B = r.A.adjoint();
    r.constants = StructureConstants(1.0, -2.0);
    r.hermitian_pair = true;
    r.interior = RealVector::Ones(dim);
    r.interior(dim - 1) = 0.0;
    return r;
}

AlgebraRealization gho_realization(int dim) {
    if (dim < 3) throw std::invalid_argument("gho_realization: dim must be at least 3");
    const Matrix a = annihilation(dim);
    const Matrix ad = a.adjoint();
    const Matrix q = (a + ad) / std::sqrt(2.0);
    const Matrix p = kI * (ad - a) / std::sqrt(2.0);

    AlgebraRealization r;
    r.name = "gho";
    r.A = q * q;
    r.B = p * p;
    r.C = kI * (q * p + p * q);
    r.constants = StructureConstants(4.0, 2.0);
    r.hermitian_pair = false;
    r.interior = RealVector::Ones(dim);
    r.interior(dim - 1) = 0.0;
    r.interior(dim - 2) = 0.0;
    return r;
}

AlgebraRealization two_level_realization() {
    AlgebraRealization r;
    r.name = "two-level";
    r.A = Matrix::Zero(2, 2);
    r.A(0, 1) = 1.0;
    r.B = r.A.adjoint();
    r.C = Matrix::Zero(2, 2);
    r.C(0, 0) = 1.0;
    r.C(1, 1) = -1.0;
    r.constants = StructureConstants(2.0, 1.0);
    r.hermitian_pair = true;
    r.interior = RealVector::Ones(2);
    return r;
}

}  // namespace lrinv
