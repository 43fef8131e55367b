#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockdyn/cell_observables.hpp"
#include "fockdyn/generator.hpp"
#include "fockdyn/gibbs.hpp"
#include "fockdyn/phase_space.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Exact unitary evolution from a cached eigendecomposition of H.
class UnitaryPropagator {
  public:
    UnitaryPropagator(const Matrix& hamiltonian, double hbar);

    Matrix propagator(double t) const;                     // e^{−iHt/ħ}
    Matrix evolve_state(const Matrix& rho, double t) const;
    Matrix heisenberg(const Matrix& op, double t) const;   // e^{iHt/ħ} A e^{−iHt/ħ}
    double purity_defect(const Matrix& rho, double t) const;

  private:
    double hbar_;
    RealVector eigs_;
    Matrix vecs_;
};

struct CorrelationSeries {
    std::vector<double> lag;
    std::vector<Complex> value;
    std::optional<double> tau_c;            // first |C| ≤ e⁻¹ |C(0)|
    std::optional<double> recurrence_time;  // first later |C| ≥ (1−1e−3)|C(0)|
};

/// C(τ) = Tr(A B(τ) ρ) with B Heisenberg-evolved.
CorrelationSeries correlation_series(const Matrix& rho, const Matrix& a, const Matrix& b,
                                     const UnitaryPropagator& prop,
                                     const std::vector<double>& lags);

std::vector<double> uniform_grid(double start, double end, int points);

/// Accompanying parameters sampled on a uniform τ grid.
struct HistoryNodes {
    std::vector<double> tau;
    std::vector<ClassicalState> z;
};

/// ∫ dτ Ŝ_t[z(τ)] by composite Simpson. Ŝ_t(τ) is the τ-derivative of the
/// lag-evolved Gibbs exponent: parameter-derivative terms (finite differences
/// on the node grid) plus the (i/ħ)[Ĥ, K̂(τ)] current terms, all Heisenberg
/// shifted to lag τ − t. Throws RefineNeeded when the embedded coarse/fine
/// estimate exceeds `refine_bound`.
Matrix history_exponent(const HistoryNodes& nodes, const CellObservables& obs,
                        const UnitaryPropagator& prop, double t,
                        double refine_bound = 1e-6, double* error_estimate = nullptr);

struct HistoryIdentityReport {
    std::vector<int> node_counts;
    std::vector<double> defects;  // trace-norm distance, reconstructed vs exact
    double order = 0.0;           // observed convergence order
    bool pass = false;
};

/// Reconstruct the unitary evolution of a Gibbs initial state from the
/// instantaneous exponent plus the history integral, at small dimension, and
/// report the trace-norm defect under quadrature refinement.
HistoryIdentityReport verify_history_identity(const ClassicalState& z0,
                                              const CellObservables& obs, double t_start,
                                              double t_end, const std::vector<int>& node_counts,
                                              const SolverOptions& opts);

struct Trajectory {
    std::vector<double> times;
    std::vector<ClassicalState> states;
    std::vector<InversionTargets> expectations;  // lab-frame per cell
    std::vector<double> entropy;                 // of the accompanying state
    std::vector<int> solver_iterations;
    std::vector<double> solver_residuals;
    double generator_energy_flux = 0.0;  // kinetic closure: ∫ Tr(L′(Ĥeff) ŵ) dt
    bool truncated = false;
    std::string failure;
};

struct EvolveOptions {
    double t_start = 0.0;
    double t_end = 1.0;
    double dt = 0.01;
    SolverOptions solver;
    VelocityMode velocity_mode = VelocityMode::from_targets;
    double tau_c = 0.0;  // sliding-window width for the memory closure
};

/// Exact-oracle trajectory: unitary evolution of ŵ[z0], expectations
/// recorded and re-inverted into accompanying parameters at each output time.
Trajectory evolve_exact(const ClassicalState& z0, const CellObservables& obs,
                        const EvolveOptions& opts);

/// Markovian closure: ρ_t ≈ ŵ[z(t)], RK4 on the cell expectations with the
/// multipliers re-inverted at every stage.
Trajectory evolve_closed_hydro(const ClassicalState& z0, const CellObservables& obs,
                               const EvolveOptions& opts);

/// Sliding-window memory closure: the traces use ŵ[z(t)] plus the
/// first-order history correction over [t − τ_c, t].
Trajectory evolve_with_memory(const ClassicalState& z0, const CellObservables& obs,
                              const EvolveOptions& opts);

/// Kinetic closure inputs: the generator is rebuilt along the trajectory
/// when the Pauli occupations are re-evaluated.
struct KineticSetup {
    const FockSpace* space = nullptr;
    InteractionTensor tensor;   // bare interaction
    Potential potential;
    int quad_order = 40;
    double eta = 0.0, eps = 0.0, tau1 = 0.0;
    bool substitute_gamma = true;
    bool pauli_update_each_step = true;
    bool use_h_eff_in_gibbs = true;
};

/// Closed kinetic evolution: d/dt Tr(Ô ŵ) = Tr(L′(Ô) ŵ) on the hydrodynamic
/// relevant set, with the accompanying state built from the effective cell
/// observables (toggleable to the bare ones).
Trajectory evolve_kinetic(const ClassicalState& z0, const KineticSetup& setup,
                          const EvolveOptions& opts);

/// Kinetic-description variant on {Ê_c} ∪ {f̂_ij}.
struct KineticGridTrajectory {
    std::vector<double> times;
    std::vector<RealVector> energy;       // per cell
    std::vector<RealVector> f_values;     // flattened grid expectations
    std::vector<ClassicalState> states;
    std::vector<double> entropy;
    bool truncated = false;
    std::string failure;
};
KineticGridTrajectory evolve_kinetic_grid(const ClassicalState& z0, const KineticSetup& setup,
                                          const PhaseSpaceGrid& grid, const EvolveOptions& opts);

}  // namespace fockdyn
