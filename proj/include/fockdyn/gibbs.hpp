#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fockdyn/cell_observables.hpp"
#include "fockdyn/phase_space.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Classical state parameters: one (β, μ, v) triple per cell. The kinetic
/// variant replaces μ by a chemical-potential field over the phase-space
/// grid (mu_grid, nx × np).
struct ClassicalState {
    RealVector beta;
    RealVector mu;
    RealVector v;
    std::optional<RealMatrix> mu_grid;

    int cells() const { return static_cast<int>(beta.size()); }
};

/// Generalized Gibbs state rho = exp(−K̂)/Tr exp(−K̂) with
/// K̂ = Σ_c β_c (Ê_c(v) − μ_c M̂_c); all particle-number sectors contribute
/// to the trace. The exponent eigendecomposition is cached.
struct GibbsState {
    Matrix exponent;
    Matrix rho;
    double log_z = 0.0;
    RealVector exponent_eigs;
    Matrix exponent_vecs;
};

GibbsState gibbs_state(const ClassicalState& z, const CellObservables& obs);

/// Kinetic-description variant: constraints {Ê_c} ∪ {f̂_ij} with exponent
/// K̂ = Σ_c β_c Ê_c(v) − Σ_ij β_{c(i)} μ_ij f̂_ij.
GibbsState gibbs_state_kinetic(const ClassicalState& z, const CellObservables& obs,
                               const PhaseSpaceGrid& grid);

/// Gibbs state for an arbitrary multiplier/operator family K̂ = Σ θ_i A_i.
GibbsState gibbs_state_from_exponent(const Matrix& exponent);

/// Von Neumann entropy −Tr ρ log ρ (eigenvalue sum, 0·log 0 = 0).
double entropy(const GibbsState& gs);

/// Kubo–Mori covariance −∂_s Tr(A exp(−K̂−sB))/Tr(exp(−K̂−sB)) at s = 0,
/// evaluated through expm_and_frechet. Symmetric and PSD for Hermitian
/// arguments.
double kubo_mori_covariance(const GibbsState& gs, const Matrix& a, const Matrix& b);

/// Gram matrix of Kubo–Mori covariances of the given operators.
RealMatrix kubo_mori_gram(const GibbsState& gs, const std::vector<Matrix>& ops);

struct SolverOptions {
    double tolerance = 1e-9;          // relative residual target
    int max_iterations = 200;
    double damping_floor = 9.5367431640625e-07;  // 2^-20
    double beta_max = 1e8;
    int outer_iterations = 60;        // velocity fixed-point cap
    double velocity_tolerance = 1e-10;
};

struct SolveDiagnostics {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> residual_history;
};

/// Damped Newton for Tr(A_i ρ(θ)) = target_i with ρ(θ) ∝ exp(−Σ θ_j A_j).
/// The Jacobian is the (PSD) Kubo–Mori Gram matrix; steps backtrack on the
/// residual norm and may be vetoed by `admissible`.
RealVector solve_multipliers(const std::vector<Matrix>& ops, const RealVector& targets,
                             RealVector theta0, const SolverOptions& opts,
                             SolveDiagnostics* diagnostics = nullptr,
                             const std::function<bool(const RealVector&)>& admissible = nullptr);

/// Lab-frame per-cell targets ⟨Ê_c⟩, ⟨M̂_c⟩, ⟨P̂_c⟩.
struct InversionTargets {
    RealVector energy;
    RealVector mass;
    RealVector momentum;
};

InversionTargets cell_expectations(const Matrix& rho, const CellObservables& obs);

/// How the velocity field is fixed during inversion:
///   from_targets     v_c = ⟨P̂_c⟩/⟨M̂_c⟩ of the assigned targets (default);
///   self_consistent  fixed point on the solved state's own expectations,
///                    which drives ⟨P̂_c(v)⟩ → 0 in the returned state. After
///                    the multiplier refit the map is close to a gauge
///                    direction, so the root is solved by accelerated
///                    iteration and pins v only up to the box-truncation
///                    scale;
///   fixed            keep z0.v.
enum class VelocityMode { from_targets, self_consistent, fixed };

struct InversionReport {
    SolveDiagnostics inner;
    int outer_iterations = 0;
    double velocity_update = 0.0;      // last |Δv|
    double rest_momentum_defect = 0.0; // max_c |⟨P̂_c(v)⟩| in the solved state
};

ClassicalState invert_expectations(const InversionTargets& targets, const CellObservables& obs,
                                   const ClassicalState& z0, const SolverOptions& opts,
                                   VelocityMode vmode = VelocityMode::from_targets,
                                   InversionReport* report = nullptr);

/// Kinetic-description inversion on {Ê_c} ∪ {f̂_ij}; velocity kept at z0.v.
ClassicalState invert_expectations_kinetic(const RealVector& energy_targets,
                                           const RealVector& f_targets,
                                           const CellObservables& obs, const PhaseSpaceGrid& grid,
                                           const ClassicalState& z0, const SolverOptions& opts,
                                           InversionReport* report = nullptr);

struct MaxEntropyReport {
    double gibbs_entropy = 0.0;
    double max_first_order_gain = 0.0;     // stationarity defect along tangents
    double max_candidate_entropy = 0.0;    // over exact-constraint candidates
    double max_constraint_violation = 0.0;
    int trials = 0;
    bool pass = false;
};

/// Randomized audit of the maximum-entropy property: tangent perturbations
/// give no first-order entropy gain, and exact-constraint candidate states
/// never beat the Gibbs entropy.
MaxEntropyReport check_max_entropy(const GibbsState& gs, const std::vector<Matrix>& constraint_ops,
                                   int trials, uint64_t seed);

}  // namespace fockdyn
