#pragma once

#include <vector>

#include "fockdyn/fock_space.hpp"
#include "fockdyn/interaction.hpp"
#include "fockdyn/potential.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Coarse-grained cell operators on a uniform partition of [0, L].
///
/// Per cell c the stored operators are
///   M̂_c = m Σ_{hk} ⟨u_h|χ_c|u_k⟩ a_h† a_k,
///   P̂_c(v) = P̂_c(0) − v_c M̂_c,
///   Ê_c(v) = Ê_c(0) − v_c P̂_c(0) + v_c²/(2m) M̂_c,
/// with Ê_c(0) the cell kinetic energy plus the pair interaction assigned to
/// the cell containing the pair midpoint. The one-body cell integrals are
/// corrected so that Σ_c M̂_c = m N̂ and Σ_c Ê_c(0) = Ĥ hold to roundoff.
struct CellObservables {
    int cell_count = 0;
    double box_length = 0.0, mass = 0.0, hbar = 0.0;
    std::vector<double> edges;  // cell_count + 1 uniform edges
    RealVector velocity;        // v_c used to dress energy and momentum

    // One-body coefficient matrices (modes × modes), all real-valued content.
    std::vector<Matrix> overlap;      // ∫_c u_h u_k
    std::vector<Matrix> kinetic;      // ∫_c u_h' u_k'
    std::vector<Matrix> antisym;      // ∫_c (u_h' u_k − u_h u_k'), antisymmetric
    std::vector<InteractionTensor> pair_energy;  // midpoint-assigned interaction share

    // Materialized Fock-space operators.
    std::vector<Operator> energy;        // Ê_c(v)
    std::vector<Operator> mass_op;       // M̂_c
    std::vector<Operator> momentum;      // P̂_c(v)
    std::vector<Operator> energy_lab;    // Ê_c(0)
    std::vector<Operator> momentum_lab;  // P̂_c(0)
    std::vector<Operator> mass_current;  // cell_count + 1 interface currents
    Matrix hamiltonian;                  // Ĥ from the same tensor

    /// One-body coefficient of Ê_c(v) (interaction part excluded).
    Matrix energy_coeff(int c, double v) const;
    Matrix momentum_coeff(int c, double v) const;
    Matrix mass_coeff(int c) const;
};

CellObservables build_cell_observables(const FockSpace& space, const InteractionTensor& tensor,
                                       const Potential& potential, int cells,
                                       const RealVector& velocity, int quad_order);

/// Re-dress energy/momentum operators at a new velocity field (cheap).
CellObservables with_velocity(const CellObservables& obs, const RealVector& velocity);

/// Interface currents J_0..J_C with (i/ħ)[Ĥ, Ô_c] = J_c − J_{c+1} exact by
/// telescoping; J_0 = J_C = 0 whenever [Ĥ, Σ_c Ô_c] = 0.
std::vector<Matrix> interface_currents(const Matrix& hamiltonian,
                                       const std::vector<Operator>& cell_ops, double hbar);

}  // namespace fockdyn
