#pragma once

#include <utility>
#include <vector>

#include "fockdyn/types.hpp"

namespace fockdyn {

/// exp(−K) together with the directional derivative d/ds exp(−K − sD)|_{s=0},
/// computed by the divided-difference (Daleckii–Krein) formula in K's
/// eigenbasis. K must be Hermitian.
struct ExpmFrechet {
    Matrix exp_neg;     // exp(−K)
    Matrix derivative;  // d/ds exp(−K − sD) at s = 0
};
ExpmFrechet expm_and_frechet(const Matrix& k, const Matrix& d);

/// exp(−K) for Hermitian K, with eigenvalues shifted so the largest weight
/// is O(1); returns log of the trace separately for stable normalization.
struct StableExp {
    Matrix exp_shifted;   // exp(−(K − k_min))
    double shift;         // k_min
    double log_trace;     // log Tr exp(−K)
    RealVector eigenvalues;
    Matrix eigenvectors;
};
StableExp stable_exp_neg(const Matrix& k);

/// Hermitian eigendecomposition (throws NumericFailure on solver failure).
std::pair<RealVector, Matrix> hermitian_eig(const Matrix& a);

double trace_norm(const Matrix& a);

/// Gauss–Legendre nodes and weights on [a, b] (Golub–Welsch).
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre(int order, double a, double b);

}  // namespace fockdyn
