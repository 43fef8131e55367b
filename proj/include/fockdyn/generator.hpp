#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fockdyn/fock_space.hpp"
#include "fockdyn/interaction.hpp"
#include "fockdyn/scattering.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Irreversible subdynamics generator acting on the bilinears a_h† a_k:
///   L′(a_h†a_k) = (i/ħ)[Ĥeff, a_h†a_k]
///                 − (1/ħ)([Γ̂, a_h†] a_k − a_h† [Γ̂, a_k])
///                 + (1/ħ) Σ_λ R̂_hλ† R̂_kλ.
/// Pairs with |E_h − E_k| ≥ ħ/τ₁ fail the slow-variable filter and are
/// dropped (recorded). By default Γ̂ is the mass-conserving substitution
/// ¼ Σ R̂†R̂, which makes L′(M̂) vanish identically.
struct SubdynamicsGenerator {
    const FockSpace* space = nullptr;
    Matrix h_eff;
    Matrix gamma;       // the Γ̂ used in L′
    Matrix gamma_raw;   // the directly assembled Γ̂ (defect reporting)
    JumpFamily jumps;
    double tau1 = 0.0, eta = 0.0, eps = 0.0, hbar = 1.0;
    bool gamma_substituted = true;
    std::vector<std::pair<int, int>> slow_pairs;
    std::vector<std::pair<int, int>> excluded_pairs;

    bool pair_kept(int h, int k) const;
    /// L′(a_h†a_k); zero matrix for filtered pairs.
    const Matrix& bilinear_action(int h, int k) const;
    /// Cached a_h†a_k matrix.
    const Matrix& bilinear(int h, int k) const;

    /// L′ applied to a one-body observable Σ coeff_{hk} a_h†a_k.
    Matrix apply_one_body(const Matrix& coeff) const;
    /// L′ on a two-body observable ½ Σ W a†a†aa by the bilinear product rule
    /// q(h1h2k2k1) = B_{h1k1}B_{h2k2} − δ_{k1h2}B_{h1k2}, first order in t,
    /// with the two-body slow filter on |E_h1+E_h2−E_k1−E_k2|.
    Matrix apply_two_body(const InteractionTensor& w) const;

    /// Crude scale  max ‖L′(a_h†a_k)‖₂ over stored pairs (validity windows).
    double action_norm() const;

  private:
    std::map<std::pair<int, int>, Matrix> action_;
    Matrix zero_;
    std::vector<Matrix> bilinear_;  // cached a_h†a_k matrices, row-major
    friend SubdynamicsGenerator build_generator(const FockSpace&, const TwoParticleSpace&,
                                                double, double, double, bool);
};

/// Assemble the generator from the scattering outputs at (η, ε) with slow
/// threshold τ₁. `substitute_gamma` selects Γ̂ ≡ ¼ΣR̂†R̂ (default) versus the
/// directly assembled Γ̂.
SubdynamicsGenerator build_generator(const FockSpace& space, const TwoParticleSpace& space2,
                                     double eta, double eps, double tau1,
                                     bool substitute_gamma = true);

/// L′(M̂) and its max-norm; ≤ 1e−10 with the substituted Γ̂.
struct MassActionReport {
    Matrix action;
    double norm = 0.0;
};
MassActionReport apply_to_mass(const SubdynamicsGenerator& gen);

/// Randomized audit of relative complete positivity: for seeded Gaussian
/// families {ψ_h}, Σ_{hk} ⟨ψ_h|(a_h†a_k + t·L′(a_h†a_k))|ψ_k⟩ ≥ −1e−9.
struct CpAuditReport {
    double minimum = 0.0;
    double time = 0.0;
    int trials = 0;
    uint64_t seed = 0;
    bool pass = false;
    std::vector<Complex> worst_family;  // flattened offending vectors if failed
};
CpAuditReport check_relative_cp(const SubdynamicsGenerator& gen, double time, int trials,
                                uint64_t seed);

/// Gain/loss split of L′(n̂_h): gain = (1/ħ)Σ_λ R̂_hλ†R̂_hλ,
/// loss = (1/ħ)([Γ̂,a_h†]a_h − a_h†[Γ̂,a_h]); the identity
/// L′(n̂_h) − (i/ħ)[Ĥeff, n̂_h] = gain − loss holds to 1e−12.
struct GainLoss {
    Matrix gain;
    Matrix loss;
    double identity_defect = 0.0;
};
GainLoss gain_loss_split(const SubdynamicsGenerator& gen, int mode);

/// |Tr(L′(n̂_h) ρ)| per mode for a stationarity candidate ρ.
struct StationarityReport {
    RealVector residual_per_mode;
    double max_residual = 0.0;
    bool stationary = false;
    double tolerance = 0.0;
};
StationarityReport stationarity_report(const SubdynamicsGenerator& gen, const Matrix& rho,
                                       double tolerance);

}  // namespace fockdyn
