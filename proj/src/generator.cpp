#include "fockdyn/generator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fockdyn/errors.hpp"
#include "fockdyn/random.hpp"

namespace fockdyn {

bool SubdynamicsGenerator::pair_kept(int h, int k) const {
    return action_.count({h, k}) > 0;
}

const Matrix& SubdynamicsGenerator::bilinear_action(int h, int k) const {
    auto it = action_.find({h, k});
    return it == action_.end() ? zero_ : it->second;
}

const Matrix& SubdynamicsGenerator::bilinear(int h, int k) const {
    return bilinear_[h * space->basis.mode_count + k];
}

Matrix SubdynamicsGenerator::apply_one_body(const Matrix& coeff) const {
    const int m = space->basis.mode_count;
    Matrix out = Matrix::Zero(space->dimension, space->dimension);
    for (int h = 0; h < m; ++h)
        for (int k = 0; k < m; ++k) {
            if (coeff(h, k) == Complex(0.0, 0.0)) continue;
            auto it = action_.find({h, k});
            if (it == action_.end()) continue;
            out += coeff(h, k) * it->second;
        }
    return out;
}

Matrix SubdynamicsGenerator::apply_two_body(const InteractionTensor& w) const {
    const int m = space->basis.mode_count;
    const auto& energies = space->basis.energies;
    Matrix out = Matrix::Zero(space->dimension, space->dimension);
    auto bilinear = [&](int h, int k) -> const Matrix& { return bilinear_[h * m + k]; };
    for (int h1 = 0; h1 < m; ++h1)
        for (int h2 = 0; h2 < m; ++h2)
            for (int k2 = 0; k2 < m; ++k2)
                for (int k1 = 0; k1 < m; ++k1) {
                    const Complex c = w.at(h1, h2, k2, k1);
                    if (c == Complex(0.0, 0.0)) continue;
                    // Two-body slow filter.
                    const double bohr =
                        std::abs(energies[h1] + energies[h2] - energies[k1] - energies[k2]);
                    if (tau1 > 0.0 && bohr / hbar >= 1.0 / tau1) continue;
                    // q = B_{h1k1} B_{h2k2} − δ_{k1h2} B_{h1k2}; product rule.
                    const Matrix& l_b1 = bilinear_action(h1, k1);
                    const Matrix& l_b2 = bilinear_action(h2, k2);
                    Matrix term = l_b1 * bilinear(h2, k2) + bilinear(h1, k1) * l_b2;
                    if (k1 == h2) term -= bilinear_action(h1, k2);
                    out += (0.5 * c) * term;
                }
    return out;
}

double SubdynamicsGenerator::action_norm() const {
    // Frobenius norms upper-bound the spectral norms; good enough for the
    // first-order validity window.
    double nrm = 0.0;
    for (const auto& [pair, act] : action_) nrm = std::max(nrm, act.norm());
    return nrm;
}

SubdynamicsGenerator build_generator(const FockSpace& space, const TwoParticleSpace& space2,
                                     double eta, double eps, double tau1,
                                     bool substitute_gamma) {
    if (space2.modes != space.basis.mode_count)
        throw std::invalid_argument("build_generator: mode count mismatch");
    SubdynamicsGenerator gen;
    gen.space = &space;
    gen.eta = eta;
    gen.eps = eps;
    gen.tau1 = tau1;
    gen.hbar = space.basis.hbar;
    gen.gamma_substituted = substitute_gamma;
    gen.zero_ = Matrix::Zero(space.dimension, space.dimension);

    const InteractionTensor v_eff = effective_interaction(space2, eta);
    gen.h_eff = build_hamiltonian(space, v_eff);
    gen.gamma_raw = gamma_operator(space, space2, eta).op.matrix;
    gen.jumps = build_jump_operators(space, space2, eta, eps);
    gen.gamma = substitute_gamma ? gamma_from_jumps(gen.jumps) : gen.gamma_raw;

    const int m = space.basis.mode_count;
    std::vector<Matrix> creators, annihilators;
    for (int f = 0; f < m; ++f) {
        annihilators.push_back(annihilator(space, f));
        creators.push_back(creator(space, f));
    }
    gen.bilinear_.resize(m * m);
    for (int h = 0; h < m; ++h)
        for (int k = 0; k < m; ++k) gen.bilinear_[h * m + k] = creators[h] * annihilators[k];

    // Lookup table (first, second) → jump operator for the λ-matched sums.
    std::vector<int> jump_at(m * m, -1);
    for (std::size_t j = 0; j < gen.jumps.index.size(); ++j)
        jump_at[gen.jumps.index[j].first * m + gen.jumps.index[j].second] =
            static_cast<int>(j);

    const Complex i_over_h(0.0, 1.0 / gen.hbar);
    for (int h = 0; h < m; ++h) {
        for (int k = 0; k < m; ++k) {
            const double bohr = std::abs(space.basis.energies[h] - space.basis.energies[k]);
            if (tau1 > 0.0 && bohr / gen.hbar >= 1.0 / tau1) {
                gen.excluded_pairs.emplace_back(h, k);
                continue;
            }
            gen.slow_pairs.emplace_back(h, k);
            const Matrix& bil = gen.bilinear_[h * m + k];
            Matrix act = i_over_h * commutator(gen.h_eff, bil);
            act -= (1.0 / gen.hbar) *
                   (commutator(gen.gamma, creators[h]) * annihilators[k] -
                    creators[h] * commutator(gen.gamma, annihilators[k]));
            for (int lam = 0; lam < m; ++lam) {
                const int jh = jump_at[h * m + lam];
                const int jk = jump_at[k * m + lam];
                if (jh < 0 || jk < 0) continue;
                act += (1.0 / gen.hbar) *
                       (gen.jumps.ops[jh].adjoint() * gen.jumps.ops[jk]);
            }
            gen.action_.emplace(std::make_pair(h, k), std::move(act));
        }
    }
    return gen;
}

MassActionReport apply_to_mass(const SubdynamicsGenerator& gen) {
    const int m = gen.space->basis.mode_count;
    Matrix coeff = gen.space->basis.mass * Matrix::Identity(m, m);
    MassActionReport rep;
    rep.action = gen.apply_one_body(coeff);
    rep.norm = max_abs(rep.action);
    return rep;
}

CpAuditReport check_relative_cp(const SubdynamicsGenerator& gen, double time, int trials,
                                uint64_t seed) {
    const double norm = gen.action_norm();
    if (time * norm > 0.1 + 1e-12)
        throw std::invalid_argument(
            "check_relative_cp: t exceeds the first-order validity window t*|L'| <= 0.1");
    const int m = gen.space->basis.mode_count;
    const Index d = gen.space->dimension;
    SeededRng rng(seed);

    CpAuditReport rep;
    rep.time = time;
    rep.trials = trials;
    rep.seed = seed;
    rep.minimum = std::numeric_limits<double>::infinity();

    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Vector> family;
        family.reserve(m);
        for (int h = 0; h < m; ++h) family.push_back(rng.unit_vector(d));
        Complex form(0.0, 0.0);
        for (int h = 0; h < m; ++h)
            for (int k = 0; k < m; ++k) {
                Matrix op = gen.bilinear(h, k);
                op += time * gen.bilinear_action(h, k);
                form += (family[h].adjoint() * op * family[k]).value();
            }
        const double value = form.real();
        if (value < rep.minimum) {
            rep.minimum = value;
            if (value < -1e-9) {
                rep.worst_family.clear();
                for (const auto& psi : family)
                    for (Index i = 0; i < d; ++i) rep.worst_family.push_back(psi[i]);
            }
        }
    }
    rep.pass = rep.minimum >= -1e-9;
    return rep;
}

GainLoss gain_loss_split(const SubdynamicsGenerator& gen, int mode) {
    const int m = gen.space->basis.mode_count;
    if (mode < 0 || mode >= m) throw std::invalid_argument("gain_loss_split: bad mode");
    const Matrix a = annihilator(*gen.space, mode);
    const Matrix c = creator(*gen.space, mode);

    GainLoss gl;
    gl.gain = Matrix::Zero(gen.space->dimension, gen.space->dimension);
    for (std::size_t j = 0; j < gen.jumps.index.size(); ++j)
        if (gen.jumps.index[j].first == mode)
            gl.gain += gen.jumps.ops[j].adjoint() * gen.jumps.ops[j];
    gl.gain /= gen.hbar;

    gl.loss = (commutator(gen.gamma, c) * a - c * commutator(gen.gamma, a)) / gen.hbar;

    const Matrix lhs = gen.bilinear_action(mode, mode) -
                       Complex(0.0, 1.0 / gen.hbar) *
                           commutator(gen.h_eff, Matrix(c * a));
    gl.identity_defect = max_abs(lhs - (gl.gain - gl.loss));
    return gl;
}

StationarityReport stationarity_report(const SubdynamicsGenerator& gen, const Matrix& rho,
                                       double tolerance) {
    const int m = gen.space->basis.mode_count;
    StationarityReport rep;
    rep.tolerance = tolerance;
    rep.residual_per_mode.resize(m);
    for (int h = 0; h < m; ++h) {
        const Matrix& act = gen.bilinear_action(h, h);
        rep.residual_per_mode[h] = std::abs((act * rho).trace().real());
    }
    rep.max_residual = rep.residual_per_mode.cwiseAbs().maxCoeff();
    rep.stationary = rep.max_residual <= tolerance;
    return rep;
}

}  // namespace fockdyn
