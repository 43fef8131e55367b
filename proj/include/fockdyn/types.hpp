// Shared scalar/matrix aliases and the dense operator wrapper.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fockdyn {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Statistics { bose, fermi };

inline int statistics_sign(Statistics s) { return s == Statistics::bose ? +1 : -1; }

/// Dense operator on a truncated Fock space. `hermitian_hint` promises
/// ‖A − A†‖_max ≤ 1e−12 and is validated on tagged construction.
struct Operator {
    Matrix matrix;
    bool hermitian_hint = false;

    Operator() = default;
    explicit Operator(Matrix m, bool hint = false) : matrix(std::move(m)), hermitian_hint(hint) {}

    Index dim() const { return matrix.rows(); }
};

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& m) {
    return max_abs(m - m.adjoint().eval());
}

/// Tag a matrix as Hermitian, validating the promise.
inline Operator hermitian_operator(Matrix m) {
    if (hermiticity_defect(m) > 1e-12)
        throw std::invalid_argument("hermitian_operator: matrix is not Hermitian to 1e-12");
    return Operator(std::move(m), true);
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

inline double real_expectation(const Matrix& op, const Matrix& rho) {
    return (op * rho).trace().real();
}
inline Complex expectation(const Matrix& op, const Matrix& rho) {
    return (op * rho).trace();
}

}  // namespace fockdyn
