#include "fockdyn/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockdyn/errors.hpp"
#include "fockdyn/linalg.hpp"
#include "fockdyn/random.hpp"

namespace fockdyn {

namespace {

void validate_classical_state(const ClassicalState& z, int cells) {
    if (z.beta.size() != cells || z.v.size() != cells)
        throw std::invalid_argument("classical state: field sizes do not match cell count");
    if (!z.mu_grid && z.mu.size() != cells)
        throw std::invalid_argument("classical state: mu size does not match cell count");
    for (int c = 0; c < cells; ++c) {
        if (!(z.beta[c] > 0.0)) throw std::invalid_argument("classical state: beta must be > 0");
        if (!std::isfinite(z.beta[c]) || !std::isfinite(z.v[c]))
            throw std::invalid_argument("classical state: non-finite entry");
    }
}

Matrix dressed_energy(const CellObservables& obs, int c, double v) {
    return obs.energy_lab[c].matrix - v * obs.momentum_lab[c].matrix +
           (v * v / (2.0 * obs.mass)) * obs.mass_op[c].matrix;
}

GibbsState finish_state(Matrix exponent) {
    GibbsState gs;
    gs.exponent = std::move(exponent);
    const StableExp se = stable_exp_neg(gs.exponent);
    const double z_shifted = se.exp_shifted.trace().real();
    gs.rho = se.exp_shifted / z_shifted;
    gs.log_z = se.log_trace;
    gs.exponent_eigs = se.eigenvalues;
    gs.exponent_vecs = se.eigenvectors;
    if (!gs.rho.allFinite()) throw NumericFailure("gibbs_state: non-finite density matrix");
    return gs;
}

}  // namespace

GibbsState gibbs_state(const ClassicalState& z, const CellObservables& obs) {
    validate_classical_state(z, obs.cell_count);
    const Index d = obs.hamiltonian.rows();
    Matrix k = Matrix::Zero(d, d);
    for (int c = 0; c < obs.cell_count; ++c)
        k += z.beta[c] * (dressed_energy(obs, c, z.v[c]) - z.mu[c] * obs.mass_op[c].matrix);
    return finish_state(std::move(k));
}

GibbsState gibbs_state_kinetic(const ClassicalState& z, const CellObservables& obs,
                               const PhaseSpaceGrid& grid) {
    if (!z.mu_grid) throw std::invalid_argument("gibbs_state_kinetic: mu_grid missing");
    if (z.mu_grid->rows() != grid.nx || z.mu_grid->cols() != grid.np)
        throw std::invalid_argument("gibbs_state_kinetic: mu_grid shape mismatch");
    validate_classical_state(z, obs.cell_count);
    const Index d = obs.hamiltonian.rows();
    Matrix k = Matrix::Zero(d, d);
    for (int c = 0; c < obs.cell_count; ++c) k += z.beta[c] * dressed_energy(obs, c, z.v[c]);
    for (int i = 0; i < grid.nx; ++i) {
        int cell = static_cast<int>(grid.x[i] / obs.box_length * obs.cell_count);
        cell = std::min(cell, obs.cell_count - 1);
        for (int j = 0; j < grid.np; ++j)
            k -= z.beta[cell] * (*z.mu_grid)(i, j) * grid.density(i, j).matrix;
    }
    return finish_state(std::move(k));
}

GibbsState gibbs_state_from_exponent(const Matrix& exponent) { return finish_state(exponent); }

double entropy(const GibbsState& gs) {
    // Weights from the cached exponent spectrum; S = −Σ p log p.
    const double shift = gs.exponent_eigs.minCoeff();
    double z = 0.0;
    for (Index i = 0; i < gs.exponent_eigs.size(); ++i)
        z += std::exp(-(gs.exponent_eigs[i] - shift));
    double s = 0.0;
    for (Index i = 0; i < gs.exponent_eigs.size(); ++i) {
        const double p = std::exp(-(gs.exponent_eigs[i] - shift)) / z;
        if (p > 0.0) s -= p * std::log(p);
    }
    return std::max(s, 0.0);
}

double kubo_mori_covariance(const GibbsState& gs, const Matrix& a, const Matrix& b) {
    // Work in the shifted frame so exp(−K) cannot overflow; the shift cancels
    // between numerator and normalization.
    const double shift = gs.exponent_eigs.minCoeff();
    const Index d = gs.exponent.rows();
    const Matrix k_shifted =
        gs.exponent - shift * Matrix::Identity(d, d);
    const ExpmFrechet ef = expm_and_frechet(k_shifted, b);
    const double z = ef.exp_neg.trace().real();
    const double mean_a = (a * ef.exp_neg).trace().real() / z;
    const double t1 = (a * ef.derivative).trace().real();
    const double t2 = ef.derivative.trace().real();
    return -(t1 - mean_a * t2) / z;
}

RealMatrix kubo_mori_gram(const GibbsState& gs, const std::vector<Matrix>& ops) {
    const int n = static_cast<int>(ops.size());
    const Index d = gs.exponent.rows();
    const double shift = gs.exponent_eigs.minCoeff();

    RealVector w(d);
    double z = 0.0;
    for (Index i = 0; i < d; ++i) {
        w[i] = std::exp(-(gs.exponent_eigs[i] - shift));
        z += w[i];
    }
    // Divided differences of e^{−x} over the shifted spectrum.
    RealMatrix div(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const double half = 0.5 * (gs.exponent_eigs[i] - gs.exponent_eigs[j]);
            const double ratio = std::abs(half) < 1e-12 ? 1.0 : std::sinh(half) / half;
            const double mid = 0.5 * (gs.exponent_eigs[i] + gs.exponent_eigs[j]) - shift;
            div(i, j) = -std::exp(-mid) * ratio;
        }

    std::vector<Matrix> tilde(ops.size());
    RealVector mean(n);
    for (int i = 0; i < n; ++i) {
        tilde[i] = gs.exponent_vecs.adjoint() * ops[i] * gs.exponent_vecs;
        double m = 0.0;
        for (Index a = 0; a < d; ++a) m += tilde[i](a, a).real() * w[a];
        mean[i] = m / z;
    }

    RealMatrix gram(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            // cov(A,B) = −Tr(A Φ_B)/Z − ⟨A⟩⟨B⟩ with Φ_B the exp derivative.
            Complex t1(0.0, 0.0);
            for (Index a = 0; a < d; ++a)
                for (Index b = 0; b < d; ++b)
                    t1 += tilde[i](b, a) * tilde[j](a, b) * div(a, b);
            const double cov = -t1.real() / z - mean[i] * mean[j];
            gram(i, j) = cov;
            gram(j, i) = cov;
        }
    }
    return gram;
}

RealVector solve_multipliers(const std::vector<Matrix>& ops, const RealVector& targets,
                             RealVector theta, const SolverOptions& opts,
                             SolveDiagnostics* diagnostics,
                             const std::function<bool(const RealVector&)>& admissible) {
    const int n = static_cast<int>(ops.size());
    if (targets.size() != n || theta.size() != n)
        throw std::invalid_argument("solve_multipliers: size mismatch");
    const Index d = ops.front().rows();

    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(targets[i]));

    auto exponent_of = [&](const RealVector& th) {
        Matrix k = Matrix::Zero(d, d);
        for (int i = 0; i < n; ++i) k += th[i] * ops[i];
        return k;
    };
    auto residual_of = [&](const GibbsState& gs) {
        RealVector r(n);
        for (int i = 0; i < n; ++i) r[i] = real_expectation(ops[i], gs.rho) - targets[i];
        return r;
    };
    // Convergence is judged in the max norm; backtracking descends the
    // Euclidean norm, for which the Newton direction is a descent direction.
    auto norm_of = [&](const RealVector& r) { return r.cwiseAbs().maxCoeff() / scale; };
    auto merit_of = [&](const RealVector& r) { return r.norm() / scale; };

    SolveDiagnostics local;
    SolveDiagnostics& diag = diagnostics ? *diagnostics : local;

    GibbsState gs = gibbs_state_from_exponent(exponent_of(theta));
    RealVector r = residual_of(gs);
    double rnorm = norm_of(r);
    double merit = merit_of(r);
    diag.residual_history.push_back(rnorm);

    // Once inside tolerance, a couple of extra full Newton steps push the
    // residual to the numerical floor; with an ill-conditioned Gram this is
    // what actually pins the multipliers.
    int polish_left = 2;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (rnorm <= opts.tolerance && polish_left == 0) {
            diag.iterations = iter;
            diag.residual = rnorm;
            diag.converged = true;
            return theta;
        }
        if (rnorm <= opts.tolerance) --polish_left;
        const RealMatrix gram = kubo_mori_gram(gs, ops);
        Eigen::SelfAdjointEigenSolver<RealMatrix> ges(gram);
        if (ges.info() != Eigen::Success)
            throw NumericFailure("solve_multipliers: Gram eigendecomposition failed");
        const double gmax = ges.eigenvalues().maxCoeff();
        const double gmin = ges.eigenvalues().minCoeff();
        if (!(gmax > 0.0) || gmin < -1e-10 * gmax || gmin <= 1e-14 * gmax)
            throw DegenerateConstraints(
                "solve_multipliers: singular Kubo-Mori Jacobian (min eigenvalue " +
                std::to_string(gmin) + ")");
        RealVector step = ges.eigenvectors() *
                          (ges.eigenvectors().transpose() * r).cwiseQuotient(ges.eigenvalues());
        // Near the admissibility boundary the Gram can be ill-conditioned and
        // the raw Newton step astronomically long; cap its length so that
        // backtracking always probes the quadratic regime.
        const double cap = 8.0 * (1.0 + theta.cwiseAbs().maxCoeff());
        const double step_len = step.cwiseAbs().maxCoeff();
        if (step_len > cap) step *= cap / step_len;

        // Armijo backtracking on the residual norm, factor 1/2.
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= opts.damping_floor) {
            const RealVector trial = theta + alpha * step;
            if (!admissible || admissible(trial)) {
                GibbsState trial_gs = gibbs_state_from_exponent(exponent_of(trial));
                const RealVector trial_r = residual_of(trial_gs);
                const double trial_merit = merit_of(trial_r);
                if (trial_merit < merit) {
                    theta = trial;
                    gs = std::move(trial_gs);
                    r = trial_r;
                    rnorm = norm_of(trial_r);
                    merit = trial_merit;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        diag.residual_history.push_back(rnorm);
        if (!accepted) {
            if (rnorm <= opts.tolerance) {
                diag.iterations = iter;
                diag.residual = rnorm;
                diag.converged = true;
                return theta;  // polish step found no further descent
            }
            throw Infeasible("solve_multipliers: residual " + std::to_string(rnorm) +
                             " stalled above tolerance with the step floor reached");
        }
        if (theta.cwiseAbs().maxCoeff() > opts.beta_max)
            throw Infeasible("solve_multipliers: multiplier magnitude exceeded beta_max "
                             "(targets at the boundary of feasibility)");
    }
    diag.iterations = opts.max_iterations;
    diag.residual = rnorm;
    throw NonConvergence("solve_multipliers: iteration cap reached", rnorm);
}

InversionTargets cell_expectations(const Matrix& rho, const CellObservables& obs) {
    InversionTargets t;
    t.energy.resize(obs.cell_count);
    t.mass.resize(obs.cell_count);
    t.momentum.resize(obs.cell_count);
    for (int c = 0; c < obs.cell_count; ++c) {
        t.energy[c] = real_expectation(obs.energy_lab[c].matrix, rho);
        t.mass[c] = real_expectation(obs.mass_op[c].matrix, rho);
        t.momentum[c] = real_expectation(obs.momentum_lab[c].matrix, rho);
    }
    return t;
}

namespace {

RealVector velocity_from(const RealVector& momentum, const RealVector& mass) {
    RealVector v(momentum.size());
    for (Index c = 0; c < momentum.size(); ++c)
        v[c] = std::abs(mass[c]) > 1e-12 ? momentum[c] / mass[c] : 0.0;
    return v;
}

}  // namespace

ClassicalState invert_expectations(const InversionTargets& targets, const CellObservables& obs,
                                   const ClassicalState& z0, const SolverOptions& opts,
                                   VelocityMode vmode, InversionReport* report) {
    const int cells = obs.cell_count;
    if (targets.energy.size() != cells || targets.mass.size() != cells ||
        targets.momentum.size() != cells)
        throw std::invalid_argument("invert_expectations: target sizes do not match cells");

    for (int c = 0; c < cells; ++c)
        if (targets.mass[c] <= 0.0)
            throw Infeasible("invert_expectations: nonpositive cell mass target lies on the "
                             "vacuum boundary of the feasible set");

    RealVector v;
    switch (vmode) {
        case VelocityMode::fixed: v = z0.v; break;
        case VelocityMode::from_targets:
        case VelocityMode::self_consistent:
            v = velocity_from(targets.momentum, targets.mass);
            break;
    }

    RealVector theta(2 * cells);
    for (int c = 0; c < cells; ++c) {
        theta[c] = z0.beta[c];
        theta[cells + c] = z0.beta[c] * z0.mu[c];
    }

    InversionReport local;
    InversionReport& rep = report ? *report : local;

    // The exponent family is globally defined on the truncated space, so the
    // iteration runs unconstrained; β > 0 is validated on the solution.
    GibbsState gs;
    RealVector v_prev, defect_prev;
    const int outer_cap = vmode == VelocityMode::self_consistent ? opts.outer_iterations : 1;
    for (int outer = 0; outer < outer_cap; ++outer) {
        rep.outer_iterations = outer + 1;

        std::vector<Matrix> ops;
        RealVector t(2 * cells);
        for (int c = 0; c < cells; ++c) {
            ops.push_back(dressed_energy(obs, c, v[c]));
            // Rest-frame energy target via the exact dressing identity.
            t[c] = targets.energy[c] - v[c] * targets.momentum[c] +
                   v[c] * v[c] / (2.0 * obs.mass) * targets.mass[c];
        }
        for (int c = 0; c < cells; ++c) {
            ops.push_back(-obs.mass_op[c].matrix);
            t[cells + c] = -targets.mass[c];
        }

        theta = solve_multipliers(ops, t, theta, opts, &rep.inner);

        Matrix k = Matrix::Zero(obs.hamiltonian.rows(), obs.hamiltonian.cols());
        for (std::size_t i = 0; i < ops.size(); ++i) k += theta[i] * ops[i];
        gs = gibbs_state_from_exponent(k);

        if (vmode != VelocityMode::self_consistent) break;
        const InversionTargets state_now = cell_expectations(gs.rho, obs);
        const RealVector v_map = velocity_from(state_now.momentum, state_now.mass);
        const RealVector defect = v_map - v;
        rep.velocity_update = defect.cwiseAbs().maxCoeff();
        if (rep.velocity_update <= opts.velocity_tolerance) break;
        if (outer + 1 == outer_cap)
            throw NonConvergence("invert_expectations: velocity fixed point did not settle",
                                 rep.velocity_update);

        // The map v ↦ ⟨P̂⟩/⟨M̂⟩ contracts slowly (boost-response ratio near
        // one), so accelerate with a per-component secant update.
        RealVector v_next = v_map;
        if (v_prev.size() == v.size()) {
            for (int c = 0; c < cells; ++c) {
                const double dg = defect[c] - defect_prev[c];
                if (std::abs(dg) > 1e-14 * (1.0 + std::abs(defect[c])))
                    v_next[c] = v[c] - defect[c] * (v[c] - v_prev[c]) / dg;
            }
        }
        v_prev = v;
        defect_prev = defect;
        v = v_next;
    }

    for (int c = 0; c < cells; ++c)
        if (!(theta[c] > 0.0))
            throw Infeasible("invert_expectations: solved multipliers leave the beta > 0 domain");

    ClassicalState z;
    z.beta.resize(cells);
    z.mu.resize(cells);
    z.v = v;
    for (int c = 0; c < cells; ++c) {
        z.beta[c] = theta[c];
        z.mu[c] = theta[cells + c] / theta[c];
    }

    // Rest-frame momentum of the solved state, per cell.
    double defect = 0.0;
    for (int c = 0; c < cells; ++c) {
        const Matrix p_rest = obs.momentum_lab[c].matrix - v[c] * obs.mass_op[c].matrix;
        defect = std::max(defect, std::abs(real_expectation(p_rest, gs.rho)));
    }
    rep.rest_momentum_defect = defect;
    return z;
}

ClassicalState invert_expectations_kinetic(const RealVector& energy_targets,
                                           const RealVector& f_targets,
                                           const CellObservables& obs, const PhaseSpaceGrid& grid,
                                           const ClassicalState& z0, const SolverOptions& opts,
                                           InversionReport* report) {
    const int cells = obs.cell_count;
    const int nf = grid.nx * grid.np;
    if (energy_targets.size() != cells || f_targets.size() != nf)
        throw std::invalid_argument("invert_expectations_kinetic: target size mismatch");

    std::vector<Matrix> ops;
    RealVector t(cells + nf);
    for (int c = 0; c < cells; ++c) {
        ops.push_back(dressed_energy(obs, c, z0.v[c]));
        t[c] = energy_targets[c];
    }
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.np; ++j) {
            ops.push_back(-grid.density(i, j).matrix);
            t[cells + i * grid.np + j] = -f_targets[i * grid.np + j];
        }

    RealVector theta(cells + nf);
    for (int c = 0; c < cells; ++c) theta[c] = z0.beta[c];
    for (int i = 0; i < grid.nx; ++i) {
        int cell = static_cast<int>(grid.x[i] / obs.box_length * cells);
        cell = std::min(cell, cells - 1);
        for (int j = 0; j < grid.np; ++j) {
            const double mu0 = z0.mu_grid ? (*z0.mu_grid)(i, j) : 0.0;
            theta[cells + i * grid.np + j] = z0.beta[cell] * mu0;
        }
    }

    InversionReport local;
    InversionReport& rep = report ? *report : local;
    theta = solve_multipliers(ops, t, theta, opts, &rep.inner);
    for (int c = 0; c < cells; ++c)
        if (!(theta[c] > 0.0))
            throw Infeasible("invert_expectations_kinetic: solved multipliers leave beta > 0");

    ClassicalState z;
    z.beta.resize(cells);
    z.mu = RealVector::Zero(cells);
    z.v = z0.v;
    for (int c = 0; c < cells; ++c) z.beta[c] = theta[c];
    RealMatrix mu_grid(grid.nx, grid.np);
    for (int i = 0; i < grid.nx; ++i) {
        int cell = static_cast<int>(grid.x[i] / obs.box_length * cells);
        cell = std::min(cell, cells - 1);
        for (int j = 0; j < grid.np; ++j)
            mu_grid(i, j) = theta[cells + i * grid.np + j] / z.beta[cell];
    }
    z.mu_grid = mu_grid;
    return z;
}

MaxEntropyReport check_max_entropy(const GibbsState& gs, const std::vector<Matrix>& constraint_ops,
                                   int trials, uint64_t seed) {
    const Index d = gs.rho.rows();
    SeededRng rng(seed);

    // Hilbert–Schmidt orthonormal frame spanning {1} ∪ constraint operators.
    std::vector<Matrix> frame;
    auto add_to_frame = [&](Matrix m) {
        for (const auto& q : frame) m -= (q.adjoint() * m).trace() * q;
        const double nrm = std::sqrt((m.adjoint() * m).trace().real());
        if (nrm > 1e-12) frame.push_back(m / nrm);
    };
    add_to_frame(Matrix::Identity(d, d));
    for (const auto& a : constraint_ops) add_to_frame(a);

    MaxEntropyReport rep;
    rep.trials = trials;
    rep.gibbs_entropy = entropy(gs);

    const auto [rho_eigs, rho_vecs] = hermitian_eig(gs.rho);
    const double rho_min = std::max(rho_eigs.minCoeff(), 0.0);

    double target_scale = 1.0;
    for (const auto& a : constraint_ops)
        target_scale = std::max(target_scale, std::abs(real_expectation(a, gs.rho)));

    auto entropy_of = [&](const Matrix& rho) {
        const auto [eigs, vecs] = hermitian_eig(rho);
        double s = 0.0;
        for (Index i = 0; i < eigs.size(); ++i)
            if (eigs[i] > 0.0) s -= eigs[i] * std::log(eigs[i]);
        return s;
    };

    for (int trial = 0; trial < trials; ++trial) {
        // Tangent direction: Hermitian, traceless, orthogonal to the constraints.
        Matrix x = rng.hermitian(d);
        for (const auto& q : frame) x -= (q.adjoint() * x).trace() * q;
        const double xnorm = std::sqrt((x.adjoint() * x).trace().real());
        if (xnorm < 1e-12) continue;
        x /= xnorm;

        // First-order entropy change along the tangent: Tr(X K̂); the Gibbs
        // exponent lies in the constraint span, so this must vanish.
        const double first_order = std::abs((x * gs.exponent).trace().real());
        rep.max_first_order_gain = std::max(rep.max_first_order_gain, first_order);

        // Exact-constraint candidate on the same line, kept PSD.
        const Eigen::SelfAdjointEigenSolver<Matrix> xe(x);
        const double xmax = xe.eigenvalues().cwiseAbs().maxCoeff();
        const double t = 0.5 * rho_min / std::max(xmax, 1e-300);
        if (t > 0.0) {
            const Matrix cand = gs.rho + t * x;
            rep.max_candidate_entropy = std::max(rep.max_candidate_entropy, entropy_of(cand));
            for (const auto& a : constraint_ops)
                rep.max_constraint_violation =
                    std::max(rep.max_constraint_violation,
                             std::abs(real_expectation(a, cand) - real_expectation(a, gs.rho)));
        }

        rep.max_candidate_entropy = std::max(rep.max_candidate_entropy, rep.gibbs_entropy);
    }

    // Rotations generated inside the commutant of every constraint operator
    // keep the constraints exactly; mixtures with the Gibbs state give
    // candidates distinct from a pure relabeling. The commutant is found as
    // the joint nullspace of G ↦ [G, A_i], feasible at desk dimensions.
    if (d <= 20 && !constraint_ops.empty()) {
        const Index d2 = d * d;
        // vec(GA − AG) = (Aᵀ ⊗ 1 − 1 ⊗ A) vec(G), column-major vec.
        Matrix stacked = Matrix::Zero(static_cast<Index>(constraint_ops.size()) * d2, d2);
        for (std::size_t i = 0; i < constraint_ops.size(); ++i) {
            const Matrix& a = constraint_ops[i];
            const Index base = static_cast<Index>(i) * d2;
            for (Index r = 0; r < d; ++r)
                for (Index c = 0; c < d; ++c)
                    for (Index s = 0; s < d; ++s) {
                        stacked(base + c * d + r, s * d + r) += a(s, c);  // vec(GA)
                        stacked(base + c * d + r, c * d + s) -= a(r, s);  // vec(AG)
                    }
        }
        Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        for (Index k = sv.size() - 1; k >= 0; --k) {
            if (sv[k] > 1e-10 * std::max(sv[0], 1.0)) break;
            Matrix g = Eigen::Map<const Matrix>(svd.matrixV().col(k).data(), d, d);
            g = 0.5 * (g + g.adjoint().eval());
            if ((g - (g.trace() / double(d)) * Matrix::Identity(d, d)).norm() < 1e-10) continue;
            // exp(0.2 i G) for Hermitian G via its spectrum.
            const auto [geigs, gvecs] = hermitian_eig(g);
            Vector phase(d);
            for (Index q = 0; q < d; ++q) phase[q] = std::exp(Complex(0.0, 0.2 * geigs[q]));
            const Matrix u = gvecs * phase.asDiagonal() * gvecs.adjoint();
            const Matrix rotated = u * gs.rho * u.adjoint();
            const Matrix mixed = 0.5 * (gs.rho + rotated);
            rep.max_candidate_entropy = std::max(rep.max_candidate_entropy, entropy_of(mixed));
            for (const auto& a : constraint_ops)
                rep.max_constraint_violation =
                    std::max(rep.max_constraint_violation,
                             std::abs(real_expectation(a, mixed) - real_expectation(a, gs.rho)));
        }
    }

    rep.pass = rep.max_first_order_gain <= 1e-9 * target_scale &&
               rep.max_candidate_entropy <= rep.gibbs_entropy + 1e-9;
    return rep;
}

}  // namespace fockdyn
