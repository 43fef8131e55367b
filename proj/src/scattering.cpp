#include "fockdyn/scattering.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fockdyn/errors.hpp"
#include "fockdyn/linalg.hpp"

namespace fockdyn {

int TwoParticleSpace::pair_index(int a, int b) const {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].first == a && pairs[i].second == b) return static_cast<int>(i);
    return -1;
}

namespace {

// Pair list read off the two-particle Fock sector so the orthonormal pair
// basis and the sector-2 basis coincide index by index.
std::vector<std::pair<int, int>> enumerate_pairs(const FockSpace& space2) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& occ : space2.sectors[2]) {
        int first = -1, second = -1;
        for (int f = 0; f < static_cast<int>(occ.size()); ++f) {
            for (int rep = 0; rep < occ[f]; ++rep) {
                if (first < 0)
                    first = f;
                else
                    second = f;
            }
        }
        pairs.emplace_back(first, second);
    }
    return pairs;
}

// Four-index tensor entry reconstructed from a pair-basis matrix, with the
// statistics extension over non-representative index orders.
Complex pair_entry(const TwoParticleSpace& sp, const Matrix& x, int l1, int l2, int f2, int f1) {
    double sign = 1.0;
    int a1 = l1, a2 = l2, b1 = f1, b2 = f2;
    if (sp.statistics == Statistics::fermi) {
        if (a1 == a2 || b1 == b2) return Complex(0.0, 0.0);
        if (a1 > a2) {
            std::swap(a1, a2);
            sign = -sign;
        }
        if (b1 > b2) {
            std::swap(b1, b2);
            sign = -sign;
        }
    } else {
        if (a1 > a2) std::swap(a1, a2);
        if (b1 > b2) std::swap(b1, b2);
    }
    const int row = sp.pair_index(a1, a2);
    const int col = sp.pair_index(b1, b2);
    if (row < 0 || col < 0) return Complex(0.0, 0.0);
    return sign * sp.norm_factor[row] * sp.norm_factor[col] * x(row, col);
}

InteractionTensor tensor_from_pair_matrix(const TwoParticleSpace& sp, const Matrix& x) {
    InteractionTensor t = zero_tensor(sp.modes);
    for (int l1 = 0; l1 < sp.modes; ++l1)
        for (int l2 = 0; l2 < sp.modes; ++l2)
            for (int f2 = 0; f2 < sp.modes; ++f2)
                for (int f1 = 0; f1 < sp.modes; ++f1)
                    t.at(l1, l2, f2, f1) = pair_entry(sp, x, l1, l2, f2, f1);
    return t;
}

// T(z) for an arbitrary (possibly occupation-dependent) Pauli diagonal.
Matrix t_matrix_with_factors(const TwoParticleSpace& sp, const RealVector& factors, Complex z,
                             double gap_tolerance = 1e-8) {
    const Index n = sp.dim();
    if (n == 0) return Matrix(0, 0);
    const Matrix v_l = factors.cast<Complex>().asDiagonal() * sp.v;
    Matrix h_l = v_l;
    for (Index i = 0; i < n; ++i) h_l(i, i) += sp.pair_energy[i];
    Eigen::ComplexEigenSolver<Matrix> es(h_l);
    if (es.info() != Eigen::Success)
        throw NumericFailure("t_matrix: H_L eigendecomposition failed");
    for (Index i = 0; i < n; ++i) {
        if (std::abs(z - es.eigenvalues()[i]) < gap_tolerance)
            throw SpectralProximity(
                "t_matrix: z within the spectral-gap tolerance of an H_L eigenvalue",
                es.eigenvalues()[i]);
    }
    Matrix resolvent_target = z * Matrix::Identity(n, n) - h_l;
    const Matrix x = resolvent_target.fullPivLu().solve(v_l);
    return sp.v + sp.v * x;
}

}  // namespace

TwoParticleSpace build_two_particle_space(const ModeBasis& basis, const InteractionTensor& tensor,
                                          const RealVector& nbar) {
    if (nbar.size() != basis.mode_count)
        throw std::invalid_argument("two_particle_space: nbar size mismatch");
    for (int f = 0; f < basis.mode_count; ++f) {
        if (nbar[f] < 0.0)
            throw std::invalid_argument("two_particle_space: nbar must be nonnegative");
        if (basis.statistics == Statistics::fermi && nbar[f] > 1.0)
            throw std::invalid_argument("two_particle_space: fermionic nbar must be <= 1");
    }

    TwoParticleSpace sp;
    sp.statistics = basis.statistics;
    sp.modes = basis.mode_count;
    sp.hbar = basis.hbar;
    sp.energies = basis.energies;
    sp.nbar = nbar;

    const FockSpace space2 = make_fock_space(basis, 2);
    sp.pairs = enumerate_pairs(space2);
    const Index n = sp.dim();
    sp.pair_energy.resize(n);
    sp.norm_factor.resize(n);
    sp.pauli_factor.resize(n);
    const double sign = statistics_sign(basis.statistics);
    for (Index i = 0; i < n; ++i) {
        const auto [a, b] = sp.pairs[i];
        sp.pair_energy[i] = basis.energies[a] + basis.energies[b];
        sp.norm_factor[i] = a == b ? 1.0 : 1.0 / std::sqrt(2.0);
        sp.pauli_factor[i] = 1.0 + sign * nbar[a] + sign * nbar[b];
    }

    const Matrix w2 = two_body_operator(space2, tensor);
    const Index off = space2.sector_offset[2];
    sp.v = w2.block(off, off, n, n);
    sp.v_pauli = sp.pauli_factor.cast<Complex>().asDiagonal() * sp.v;
    sp.h_pauli = sp.v_pauli;
    for (Index i = 0; i < n; ++i) sp.h_pauli(i, i) += sp.pair_energy[i];
    if (n > 0) {
        Eigen::ComplexEigenSolver<Matrix> es(sp.h_pauli);
        if (es.info() != Eigen::Success)
            throw NumericFailure("two_particle_space: H_L eigendecomposition failed");
        sp.h_pauli_eigs = es.eigenvalues();
    }
    return sp;
}

TMatrix t_matrix(const TwoParticleSpace& space2, Complex z) {
    for (Index i = 0; i < space2.h_pauli_eigs.size(); ++i)
        if (std::abs(z - space2.h_pauli_eigs[i]) < 1e-8)
            throw SpectralProximity(
                "t_matrix: z within the spectral-gap tolerance of an H_L eigenvalue",
                space2.h_pauli_eigs[i]);
    TMatrix tm;
    tm.z = z;
    tm.t = t_matrix_with_factors(space2, space2.pauli_factor, z);
    return tm;
}

Regularization default_regularization(const ModeBasis& basis) {
    Regularization reg;
    const double width = 2.0 * (basis.energies.back() - basis.energies.front());
    reg.eta = std::max(width, 10.0 * basis.energies.front()) / (10.0 * basis.hbar);
    reg.eps = reg.eta / 10.0;
    return reg;
}

namespace {

// T at every distinct pair energy (plus the common imaginary shift).
std::vector<Matrix> t_at_pair_energies(const TwoParticleSpace& sp, double imag_shift) {
    std::vector<Matrix> out(sp.dim());
    std::map<double, Matrix> cache;
    for (Index i = 0; i < sp.dim(); ++i) {
        auto it = cache.find(sp.pair_energy[i]);
        if (it == cache.end()) {
            const Complex z(sp.pair_energy[i], imag_shift);
            it = cache.emplace(sp.pair_energy[i], t_matrix(sp, z).t).first;
        }
        out[i] = it->second;
    }
    return out;
}

}  // namespace

InteractionTensor effective_interaction(const TwoParticleSpace& space2, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("effective_interaction: eta must be > 0");
    const auto t_cols = t_at_pair_energies(space2, space2.hbar * eta);
    const Index n = space2.dim();
    Matrix x(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
            x(r, c) = 0.5 * (t_cols[c](r, c) + std::conj(t_cols[r](c, r)));
    return tensor_from_pair_matrix(space2, x);
}

GammaResult gamma_operator(const FockSpace& space, const TwoParticleSpace& space2, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("gamma_operator: eta must be > 0");
    const auto t_cols = t_at_pair_energies(space2, space2.hbar * eta);
    const Index n = space2.dim();
    Matrix y(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
            y(r, c) = Complex(0.0, 0.5) * (t_cols[c](r, c) - std::conj(t_cols[r](c, r)));
    const InteractionTensor g = tensor_from_pair_matrix(space2, y);

    GammaResult res;
    Matrix gamma = two_body_operator(space, g);
    gamma = 0.5 * (gamma + gamma.adjoint().eval());  // scrub roundoff
    const auto [eigs, vecs] = hermitian_eig(gamma);
    res.min_eigenvalue = eigs.minCoeff();
    res.psd_within_tolerance = res.min_eigenvalue >= -1e-8 * std::max(1.0, eigs.cwiseAbs().maxCoeff());
    res.op = Operator(std::move(gamma), true);
    return res;
}

JumpFamily build_jump_operators(const FockSpace& space, const TwoParticleSpace& space2,
                                double eta, double eps) {
    if (!(eta > eps && eps > 0.0))
        throw std::invalid_argument("jump_operators: require eta > eps > 0");
    JumpFamily fam;
    fam.eta = eta;
    fam.eps = eps;
    const int m = space2.modes;
    const double hbar = space2.hbar;
    const double sign = statistics_sign(space2.statistics);

    const auto t_cols = t_at_pair_energies(space2, hbar * (eta - eps));
    // Pair-matrix whose (row, col) entry is ⟨row| T(E_col + iħ(η−ε)) |col⟩.
    Matrix t_elem(space2.dim(), space2.dim());
    for (Index r = 0; r < space2.dim(); ++r)
        for (Index c = 0; c < space2.dim(); ++c) t_elem(r, c) = t_cols[c](r, c);

    std::vector<Matrix> annihilators;
    for (int f = 0; f < m; ++f) annihilators.push_back(annihilator(space, f));

    for (int k = 0; k < m; ++k) {
        for (int lam = 0; lam < m; ++lam) {
            if (space2.statistics == Statistics::fermi && k == lam) continue;
            const Complex factor = 1.0 + sign * space2.nbar[lam] + sign * space2.nbar[k];
            const Complex prefactor =
                Complex(0.0, -1.0) * std::sqrt(2.0 * eps * factor);
            Matrix op = Matrix::Zero(space.dimension, space.dimension);
            const double e_pair = space2.energies[k] + space2.energies[lam];
            for (int f1 = 0; f1 < m; ++f1) {
                for (int f2 = 0; f2 < m; ++f2) {
                    if (space2.statistics == Statistics::fermi && f1 == f2) continue;
                    const Complex elem = pair_entry(space2, t_elem, k, lam, f2, f1);
                    if (elem == Complex(0.0, 0.0)) continue;
                    const Complex denom(e_pair - space2.energies[f1] - space2.energies[f2],
                                        -hbar * eps);
                    op += (elem / denom) * (annihilators[f2] * annihilators[f1]);
                }
            }
            fam.index.emplace_back(k, lam);
            fam.ops.push_back(prefactor * op);
        }
    }
    return fam;
}

Matrix gamma_from_jumps(const JumpFamily& jumps) {
    if (jumps.ops.empty()) throw std::invalid_argument("gamma_from_jumps: empty family");
    const Index d = jumps.ops.front().rows();
    Matrix g = Matrix::Zero(d, d);
    for (const auto& r : jumps.ops) g += r.adjoint() * r;
    return 0.25 * g;
}

namespace {

// Occupation-resolved Pauli factors for the exact-operator mode.
RealVector factors_at_occupation(const TwoParticleSpace& sp, const std::vector<int>& occ) {
    RealVector f(sp.dim());
    const double sign = statistics_sign(sp.statistics);
    for (Index i = 0; i < sp.dim(); ++i) {
        const auto [a, b] = sp.pairs[i];
        f[i] = 1.0 + sign * occ[a] + sign * occ[b];
    }
    return f;
}

// Amplitude of a_{f2} a_{f1} |occ⟩ and the resulting occupation; false if it
// annihilates the state.
bool apply_two_annihilations(const FockSpace& space, std::vector<int>& occ, int f1, int f2,
                             double& amp) {
    const bool fermi = space.basis.statistics == Statistics::fermi;
    for (int f : {f1, f2}) {
        if (occ[f] == 0) return false;
        if (fermi) {
            int string = 0;
            for (int g = 0; g < f; ++g) string += occ[g];
            amp *= (string % 2 == 0) ? 1.0 : -1.0;
        } else {
            amp *= std::sqrt(static_cast<double>(occ[f]));
        }
        occ[f] -= 1;
    }
    return true;
}

}  // namespace

Matrix gamma_operator_exact(const FockSpace& space, const InteractionTensor& tensor, double eta) {
    const TwoParticleSpace sp = build_two_particle_space(
        space.basis, tensor, RealVector::Zero(space.basis.mode_count));
    const double hbar = space.basis.hbar;
    Matrix gamma = Matrix::Zero(space.dimension, space.dimension);

    // Cache T-matrices per intermediate occupation (diagonal Pauli operators
    // take definite values on each occupation state).
    std::map<std::vector<int>, std::vector<Matrix>> cache;
    auto t_for = [&](const std::vector<int>& occ) -> const std::vector<Matrix>& {
        auto it = cache.find(occ);
        if (it == cache.end()) {
            const RealVector factors = factors_at_occupation(sp, occ);
            std::vector<Matrix> cols(sp.dim());
            std::map<double, Matrix> by_energy;
            for (Index i = 0; i < sp.dim(); ++i) {
                auto jt = by_energy.find(sp.pair_energy[i]);
                if (jt == by_energy.end())
                    jt = by_energy
                             .emplace(sp.pair_energy[i],
                                      t_matrix_with_factors(
                                          sp, factors, Complex(sp.pair_energy[i], hbar * eta)))
                             .first;
                cols[i] = jt->second;
            }
            it = cache.emplace(occ, std::move(cols)).first;
        }
        return it->second;
    };

    const int m = space.basis.mode_count;
    for (Index col = 0; col < space.dimension; ++col) {
        const auto& occ = space.occupation(col);
        for (int f1 = 0; f1 < m; ++f1) {
            for (int f2 = 0; f2 < m; ++f2) {
                std::vector<int> mid = occ;
                double amp = 1.0;
                if (!apply_two_annihilations(space, mid, f1, f2, amp)) continue;
                const auto& t_cols = t_for(mid);
                Matrix y(sp.dim(), sp.dim());
                for (Index r = 0; r < sp.dim(); ++r)
                    for (Index c = 0; c < sp.dim(); ++c)
                        y(r, c) = Complex(0.0, 0.5) *
                                  (t_cols[c](r, c) - std::conj(t_cols[r](c, r)));
                // Creations a_l1† a_l2† with the tensor entry from this column's
                // occupation-resolved pair matrix.
                for (int l2 = 0; l2 < m; ++l2) {
                    std::vector<int> up1 = mid;
                    double amp2 = amp;
                    if (space.basis.statistics == Statistics::fermi) {
                        if (up1[l2] == 1) continue;
                        int string = 0;
                        for (int g = 0; g < l2; ++g) string += up1[g];
                        amp2 *= (string % 2 == 0) ? 1.0 : -1.0;
                    } else {
                        amp2 *= std::sqrt(static_cast<double>(up1[l2] + 1));
                    }
                    up1[l2] += 1;
                    for (int l1 = 0; l1 < m; ++l1) {
                        std::vector<int> up2 = up1;
                        double amp3 = amp2;
                        if (space.basis.statistics == Statistics::fermi) {
                            if (up2[l1] == 1) continue;
                            int string = 0;
                            for (int g = 0; g < l1; ++g) string += up2[g];
                            amp3 *= (string % 2 == 0) ? 1.0 : -1.0;
                        } else {
                            amp3 *= std::sqrt(static_cast<double>(up2[l1] + 1));
                        }
                        up2[l1] += 1;
                        const Index row = space.index_of(up2);
                        if (row < 0) continue;
                        const Complex g_entry = pair_entry(sp, y, l1, l2, f2, f1);
                        gamma(row, col) += 0.5 * g_entry * amp3;
                    }
                }
            }
        }
    }
    return gamma;
}

JumpFamily build_jump_operators_exact(const FockSpace& space, const InteractionTensor& tensor,
                                      double eta, double eps) {
    if (!(eta > eps && eps > 0.0))
        throw std::invalid_argument("jump_operators_exact: require eta > eps > 0");
    const TwoParticleSpace sp = build_two_particle_space(
        space.basis, tensor, RealVector::Zero(space.basis.mode_count));
    const double hbar = space.basis.hbar;
    const double sign = statistics_sign(space.basis.statistics);
    const int m = space.basis.mode_count;

    std::map<std::vector<int>, Matrix> cache;  // element matrix per occupation
    auto elem_for = [&](const std::vector<int>& occ) -> const Matrix& {
        auto it = cache.find(occ);
        if (it == cache.end()) {
            const RealVector factors = factors_at_occupation(sp, occ);
            Matrix t_elem(sp.dim(), sp.dim());
            std::map<double, Matrix> by_energy;
            for (Index c = 0; c < sp.dim(); ++c) {
                auto jt = by_energy.find(sp.pair_energy[c]);
                if (jt == by_energy.end())
                    jt = by_energy
                             .emplace(sp.pair_energy[c],
                                      t_matrix_with_factors(
                                          sp, factors,
                                          Complex(sp.pair_energy[c], hbar * (eta - eps))))
                             .first;
                for (Index r = 0; r < sp.dim(); ++r) t_elem(r, c) = jt->second(r, c);
            }
            it = cache.emplace(occ, std::move(t_elem)).first;
        }
        return it->second;
    };

    JumpFamily fam;
    fam.eta = eta;
    fam.eps = eps;
    for (int k = 0; k < m; ++k) {
        for (int lam = 0; lam < m; ++lam) {
            if (space.basis.statistics == Statistics::fermi && k == lam) continue;
            Matrix op = Matrix::Zero(space.dimension, space.dimension);
            const double e_pair = space.basis.energies[k] + space.basis.energies[lam];
            for (Index col = 0; col < space.dimension; ++col) {
                const auto& occ = space.occupation(col);
                for (int f1 = 0; f1 < m; ++f1) {
                    for (int f2 = 0; f2 < m; ++f2) {
                        if (space.basis.statistics == Statistics::fermi && f1 == f2) continue;
                        std::vector<int> mid = occ;
                        double amp = 1.0;
                        if (!apply_two_annihilations(space, mid, f1, f2, amp)) continue;
                        const Index row = space.index_of(mid);
                        if (row < 0) continue;
                        const Complex elem = pair_entry(sp, elem_for(mid), k, lam, f2, f1);
                        if (elem == Complex(0.0, 0.0)) continue;
                        const Complex factor =
                            1.0 + sign * mid[lam] + sign * mid[k];
                        const Complex prefactor =
                            Complex(0.0, -1.0) * std::sqrt(2.0 * eps * factor);
                        const Complex denom(
                            e_pair - space.basis.energies[f1] - space.basis.energies[f2],
                            -hbar * eps);
                        op(row, col) += prefactor * (elem / denom) * amp;
                    }
                }
            }
            fam.index.emplace_back(k, lam);
            fam.ops.push_back(std::move(op));
        }
    }
    return fam;
}

Vector t_matrix_spectrum(const TwoParticleSpace& space2, Complex z) {
    const TMatrix tm = t_matrix(space2, z);
    Eigen::ComplexEigenSolver<Matrix> es(tm.t);
    if (es.info() != Eigen::Success)
        throw NumericFailure("t_matrix_spectrum: eigendecomposition failed");
    return es.eigenvalues();
}

}  // namespace fockdyn
