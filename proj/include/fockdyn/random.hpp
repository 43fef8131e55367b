// Seeded RNG with an implementation-independent Gaussian stream
// (Box–Muller over mt19937_64), so audits are reproducible byte-for-byte.
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "fockdyn/types.hpp"

namespace fockdyn {

class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double gaussian() {
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex complex_gaussian() { return Complex(gaussian(), gaussian()) / std::sqrt(2.0); }

    Matrix hermitian(Index n) {
        Matrix a(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = complex_gaussian();
        return 0.5 * (a + a.adjoint().eval());
    }

    Vector unit_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = complex_gaussian();
        v.normalize();
        return v;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace fockdyn
