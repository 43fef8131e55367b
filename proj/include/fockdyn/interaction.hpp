#pragma once

#include <vector>

#include "fockdyn/fock_space.hpp"
#include "fockdyn/mode_basis.hpp"
#include "fockdyn/potential.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Mode-space matrix elements of the two-body potential,
///   V[l1,l2,f2,f1] = ∫∫ u_l1(x) u_l2(y) V(|x−y|) u_f2(y) u_f1(x) dx dy,
/// with the pair symmetry V[l1,l2,f2,f1] = V[l2,l1,f1,f2] and hermiticity
/// V[l1,l2,f2,f1] = conj(V[f1,f2,l2,l1]) enforced by symmetrization.
struct InteractionTensor {
    int modes = 0;
    std::vector<Complex> data;            // row-major [l1][l2][f2][f1]
    double symmetrization_defect = 0.0;   // max |V − V_sym| before symmetrizing
    double quadrature_defect = 0.0;       // entrywise change under an order bump

    Complex& at(int l1, int l2, int f2, int f1) {
        return data[((static_cast<std::size_t>(l1) * modes + l2) * modes + f2) * modes + f1];
    }
    Complex at(int l1, int l2, int f2, int f1) const {
        return data[((static_cast<std::size_t>(l1) * modes + l2) * modes + f2) * modes + f1];
    }
    double max_entry() const;
};

InteractionTensor zero_tensor(int modes);

/// Tensor-product Gauss–Legendre quadrature of the two-body matrix elements.
/// Requires quad_order >= 2M; throws AccuracyFailure when the embedded
/// convergence estimate exceeds 1e−6.
InteractionTensor interaction_tensor(const ModeBasis& basis, const Potential& potential,
                                     int quad_order);

/// ½ Σ V[l1,l2,f2,f1] a_l1† a_l2† a_f2 a_f1 on the full space.
Matrix two_body_operator(const FockSpace& space, const InteractionTensor& tensor);

/// Ĥ = Σ_f E_f n̂_f + two_body_operator(V). Hermitian, block-diagonal in N.
Matrix build_hamiltonian(const FockSpace& space, const InteractionTensor& tensor);

}  // namespace fockdyn
