#include "fockdyn/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fockdyn/errors.hpp"

namespace fockdyn {

std::pair<RealVector, Matrix> hermitian_eig(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw NumericFailure("hermitian_eig: eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ExpmFrechet expm_and_frechet(const Matrix& k, const Matrix& d) {
    if (k.rows() != k.cols() || d.rows() != d.cols() || k.rows() != d.rows())
        throw std::invalid_argument("expm_and_frechet: shape mismatch");
    if (hermiticity_defect(k) > 1e-10)
        throw std::invalid_argument("expm_and_frechet: K must be Hermitian");

    const auto [eigs, vecs] = hermitian_eig(k);
    const Index n = k.rows();

    RealVector w(n);
    for (Index i = 0; i < n; ++i) w[i] = std::exp(-eigs[i]);

    ExpmFrechet out;
    out.exp_neg = vecs * w.asDiagonal() * vecs.adjoint();

    // Divided differences of f(x) = e^{−x}: (e^{−ki} − e^{−kj})/(ki − kj)
    // with confluent limit −e^{−ki}. The sinh form is cancellation-free:
    //   (e^{−ki} − e^{−kj})/(ki − kj) = −e^{−(ki+kj)/2} sinh(δ/2)/(δ/2).
    const Matrix d_tilde = vecs.adjoint() * d * vecs;
    Matrix phi(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double half_delta = 0.5 * (eigs[i] - eigs[j]);
            const double ratio =
                std::abs(half_delta) < 1e-12 ? 1.0 : std::sinh(half_delta) / half_delta;
            const double div = -std::exp(-0.5 * (eigs[i] + eigs[j])) * ratio;
            phi(i, j) = d_tilde(i, j) * div;
        }
    }
    out.derivative = vecs * phi * vecs.adjoint();
    return out;
}

StableExp stable_exp_neg(const Matrix& k) {
    const auto [eigs, vecs] = hermitian_eig(k);
    const Index n = k.rows();
    StableExp out;
    out.eigenvalues = eigs;
    out.eigenvectors = vecs;
    out.shift = eigs.minCoeff();
    RealVector w(n);
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
        w[i] = std::exp(-(eigs[i] - out.shift));
        sum += w[i];
    }
    if (!std::isfinite(sum) || sum <= 0.0)
        throw NumericFailure("stable_exp_neg: overflow despite shift stabilization");
    out.exp_shifted = vecs * w.asDiagonal() * vecs.adjoint();
    out.log_trace = std::log(sum) - out.shift;
    return out;
}

double trace_norm(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

Quadrature gauss_legendre(int order, double a, double b) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    // Golub–Welsch on the Jacobi matrix of Legendre polynomials.
    RealMatrix jacobi = RealMatrix::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        const double beta = i / std::sqrt(4.0 * i * i - 1.0);
        jacobi(i, i - 1) = beta;
        jacobi(i - 1, i) = beta;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw NumericFailure("gauss_legendre: eigendecomposition failed");

    Quadrature q;
    q.nodes.resize(order);
    q.weights.resize(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) {
        const double x = solver.eigenvalues()[i];
        const double w0 = solver.eigenvectors()(0, i);
        q.nodes[i] = mid + half * x;
        q.weights[i] = 2.0 * w0 * w0 * half;
    }
    return q;
}

}  // namespace fockdyn
