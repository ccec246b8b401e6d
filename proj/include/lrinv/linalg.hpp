// linalg.hpp: dense complex operator helpers shared by every module

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace lrinv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Raised when the integrators or the gauge construction cannot deliver a
// trustworthy number (pole of the auxiliary angles, step underflow, overflow).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Auxiliary angle a(t) reached a pole of the (a, b) chart.
class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

inline void require_same_shape(const Matrix& x, const Matrix& y, const char* where) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

// XY - YX
inline Matrix commutator(const Matrix& x, const Matrix& y) {
    require_same_shape(x, y, "commutator");
    return x * y - y * x;
}

// Diagonal 0/1 mask applied on both sides: P X P.
inline Matrix project(const Matrix& x, const RealVector& mask) {
    return mask.cast<Complex>().asDiagonal() * x * mask.cast<Complex>().asDiagonal();
}

inline double projected_norm(const Matrix& x, const RealVector& mask) {
    return project(x, mask).norm();
}

inline bool all_finite(const Matrix& x) {
    return x.allFinite();
}

inline double hermiticity_defect(const Matrix& x) {
    return (x - x.adjoint()).norm();
}

// Map an angle onto (-pi, pi].
inline double wrap_angle(double angle) {
    double w = std::remainder(angle, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

}  // namespace lrinv
