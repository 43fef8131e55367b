#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fockdyn/fock_space.hpp"
#include "fockdyn/interaction.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Symmetrized two-particle space. The orthonormal pair basis is the
/// two-particle Fock sector, so the pair matrix of the interaction is by
/// construction the sector-2 block of ½ Σ V a†a†aa, and tensors
/// reconstructed from pair matrices contract back to the same operator.
/// The medium enters through mean occupations n̄: rows of V̂_L carry the
/// statistics factor (1 ± n̄_l1 ± n̄_l2).
struct TwoParticleSpace {
    Statistics statistics = Statistics::bose;
    int modes = 0;
    double hbar = 0.0;
    std::vector<double> energies;              // one-body E_f
    std::vector<std::pair<int, int>> pairs;    // (l1 <= l2), fermi strict
    RealVector pair_energy;                    // E_l1 + E_l2
    RealVector norm_factor;                    // 1/√2 distinct, 1 equal
    RealVector nbar;
    RealVector pauli_factor;                   // (1 ± n̄_l1 ± n̄_l2)
    Matrix v;                                  // V̂ in the orthonormal basis
    Matrix v_pauli;                            // V̂_L = diag(pauli) · V̂
    Matrix h_pauli;                            // Ĥ_L = Ĥ0 + V̂_L (non-Hermitian)
    Vector h_pauli_eigs;

    int pair_index(int a, int b) const;        // a <= b
    Index dim() const { return static_cast<Index>(pairs.size()); }
};

TwoParticleSpace build_two_particle_space(const ModeBasis& basis, const InteractionTensor& tensor,
                                          const RealVector& nbar);

struct TMatrix {
    Complex z;
    Matrix t;  // orthonormal pair basis
};

/// T(z) = V̂ + V̂ (z − Ĥ_L)⁻¹ V̂_L. Requires dist(z, spec Ĥ_L) ≥ 1e−8.
TMatrix t_matrix(const TwoParticleSpace& space2, Complex z);

/// Default regularization scales: ħη = (two-particle spectral width)/10,
/// ε = η/10.
struct Regularization {
    double eta = 0.0;
    double eps = 0.0;
};
Regularization default_regularization(const ModeBasis& basis);

/// Self-adjoint part of the scattering operator as an interaction tensor:
/// element (l|f) is ½(T(E_f1+E_f2+iηħ) + T(E_l1+E_l2+iηħ)†), converted back
/// to four-index form. Hermitian by construction.
InteractionTensor effective_interaction(const TwoParticleSpace& space2, double eta);

/// Γ̂ = ½ Σ a†a† ⟨(i/2)(T(z_f) − T(z_l)†)⟩ aa on the full space, with a PSD
/// diagnostic on its two-particle-and-above block.
struct GammaResult {
    Operator op;
    double min_eigenvalue = 0.0;   // of the Hermitian matrix
    bool psd_within_tolerance = true;
};
GammaResult gamma_operator(const FockSpace& space, const TwoParticleSpace& space2, double eta);

/// Collision jump operators R̂_{kλ} (each lowers the particle number by two):
///   R̂_{kλ} = −i √(2ε(1±n̄_λ±n̄_k)) Σ_{f1f2} ⟨kλ|T(E_f1+E_f2+iħ(η−ε))|f2f1⟩
///             / (E_k+E_λ−E_f1−E_f2 − iħε) · a_f2 a_f1.
struct JumpFamily {
    std::vector<std::pair<int, int>> index;  // ordered (k, λ) mode pairs
    std::vector<Matrix> ops;
    double eta = 0.0, eps = 0.0;
};
JumpFamily build_jump_operators(const FockSpace& space, const TwoParticleSpace& space2,
                                double eta, double eps);

/// ¼ Σ_{kλ} R̂_{kλ}† R̂_{kλ} — the mass-conserving replacement for Γ̂.
Matrix gamma_from_jumps(const JumpFamily& jumps);

/// Exact-operator Pauli mode (desk scale): the statistics factors act as
/// diagonal operators evaluated on the occupation state to the right of the
/// coefficient, instead of mean-field numbers.
Matrix gamma_operator_exact(const FockSpace& space, const InteractionTensor& tensor, double eta);
JumpFamily build_jump_operators_exact(const FockSpace& space, const InteractionTensor& tensor,
                                      double eta, double eps);

/// Spectra for the diagnostic dump: eigenvalues of T(z) and of Γ̂.
Vector t_matrix_spectrum(const TwoParticleSpace& space2, Complex z);

}  // namespace fockdyn
