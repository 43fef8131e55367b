#include <doctest.h>

#include <cmath>

#include "fockdyn/errors.hpp"
#include "fockdyn/fock_space.hpp"
#include "fockdyn/interaction.hpp"
#include "fockdyn/linalg.hpp"
#include "fockdyn/scattering.hpp"
#include "test_helpers.hpp"

using namespace fockdyn;
using testing_support::Rng;

namespace {

InteractionTensor gaussian_tensor(const ModeBasis& basis, double lambda) {
    return interaction_tensor(basis, make_potential(Potential::Kind::gaussian, lambda, 0.2), 40);
}

InteractionTensor scaled(const InteractionTensor& t, double factor) {
    InteractionTensor out = t;
    for (auto& v : out.data) v *= factor;
    return out;
}

// Least-squares slope of log|d| against log(lambda).
double fitted_order(const std::vector<double>& lambdas, const std::vector<double>& defects) {
    const int n = static_cast<int>(lambdas.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(lambdas[i]);
        const double y = std::log(defects[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("pauli factors dress the interaction rows") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
    const auto tensor = gaussian_tensor(basis, 0.3);

    SUBCASE("empty medium leaves V unchanged") {
        const auto sp = build_two_particle_space(basis, tensor, RealVector::Zero(3));
        CHECK(max_abs(sp.v_pauli - sp.v) == 0.0);
    }

    SUBCASE("unit bosonic occupations triple the interaction") {
        const auto sp = build_two_particle_space(basis, tensor, RealVector::Ones(3));
        CHECK(max_abs(sp.v_pauli - 3.0 * sp.v) < 1e-14);
    }

    SUBCASE("fully blocked fermions flip the sign") {
        const auto fb = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::fermi);
        const auto ft = gaussian_tensor(fb, 0.3);
        const auto sp = build_two_particle_space(fb, ft, RealVector::Ones(3));
        CHECK(max_abs(sp.v_pauli + sp.v) < 1e-14);
        CHECK_THROWS_AS(build_two_particle_space(fb, ft, RealVector::Constant(3, 1.2)),
                        std::invalid_argument);
    }
}

TEST_CASE("pair matrix and four-index tensor reconstruct each other") {
    Rng rng(9);
    for (auto stat : {Statistics::bose, Statistics::fermi}) {
        const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, stat);
        const auto space = make_fock_space(basis, 2);
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.2),
                                                 RealVector::Zero(3));
        const Index n = sp.dim();
        const Matrix x = rng.hermitian(n);
        const InteractionTensor t = [&] {
            // Reconstruction lives inside effective_interaction; here we reuse
            // its underlying convention through gamma-style access: build the
            // tensor entry by entry from the pair matrix via the public
            // contract (sector-2 block must reproduce x).
            InteractionTensor out = zero_tensor(3);
            for (int l1 = 0; l1 < 3; ++l1)
                for (int l2 = 0; l2 < 3; ++l2)
                    for (int f2 = 0; f2 < 3; ++f2)
                        for (int f1 = 0; f1 < 3; ++f1) {
                            double sign = 1.0;
                            int a1 = l1, a2 = l2, b1 = f1, b2 = f2;
                            if (stat == Statistics::fermi) {
                                if (a1 == a2 || b1 == b2) continue;
                                if (a1 > a2) { std::swap(a1, a2); sign = -sign; }
                                if (b1 > b2) { std::swap(b1, b2); sign = -sign; }
                            } else {
                                if (a1 > a2) std::swap(a1, a2);
                                if (b1 > b2) std::swap(b1, b2);
                            }
                            const int r = sp.pair_index(a1, a2);
                            const int c = sp.pair_index(b1, b2);
                            out.at(l1, l2, f2, f1) =
                                sign * sp.norm_factor[r] * sp.norm_factor[c] * x(r, c);
                        }
            return out;
        }();
        const Matrix w2 = two_body_operator(space, t);
        const Index off = space.sector_offset[2];
        CHECK(max_abs(Matrix(w2.block(off, off, n, n)) - x) < 1e-12);
    }
}

TEST_CASE("t-matrix: zero potential, Born order, Lippmann-Schwinger form") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
    const auto reg = default_regularization(basis);
    const Complex z(basis.energies[0] + basis.energies[1], basis.hbar * reg.eta);

    SUBCASE("V = 0 gives T = 0") {
        const auto sp = build_two_particle_space(basis, zero_tensor(3), RealVector::Zero(3));
        CHECK(max_abs(t_matrix(sp, z).t) == 0.0);
    }

    SUBCASE("Born defect scales as the square of the strength") {
        const auto unit = gaussian_tensor(basis, 1.0);
        std::vector<double> lambdas = {1e-2, 1e-3, 1e-4};
        std::vector<double> defects;
        for (double lam : lambdas) {
            const auto sp =
                build_two_particle_space(basis, scaled(unit, lam), RealVector::Zero(3));
            const Matrix t = t_matrix(sp, z).t;
            defects.push_back(max_abs(t - sp.v));
        }
        const double order = fitted_order(lambdas, defects);
        CHECK(order == doctest::Approx(2.0).epsilon(0.05));
    }

    SUBCASE("equals the alternative form solved as a linear system at nbar = 0") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.4),
                                                 RealVector::Zero(3));
        const Matrix t = t_matrix(sp, z).t;
        const Index n = sp.dim();
        Matrix g0inv = z * Matrix::Identity(n, n);
        for (Index i = 0; i < n; ++i) g0inv(i, i) -= sp.pair_energy[i];
        const Matrix g0 = g0inv.inverse();
        // (1 − V G0) T = V
        const Matrix t_ls =
            (Matrix::Identity(n, n) - sp.v * g0).fullPivLu().solve(sp.v);
        CHECK(max_abs(t - t_ls) < 1e-10);
    }

    SUBCASE("conjugation identity for real pauli factors") {
        Rng rng(12);
        RealVector nbar(3);
        for (int f = 0; f < 3; ++f) nbar[f] = rng.uniform();
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.35), nbar);
        const Matrix t1 = t_matrix(sp, z).t;
        const Matrix t2 = t_matrix(sp, std::conj(z)).t;
        CHECK(max_abs(t1.adjoint().eval() - t2) < 1e-11);
    }

    SUBCASE("spectral proximity is rejected with the offending eigenvalue") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.4),
                                                 RealVector::Zero(3));
        CHECK_THROWS_AS(t_matrix(sp, sp.h_pauli_eigs[0]), SpectralProximity);
    }

    SUBCASE("resolvent identity on the two-particle block at random z") {
        Rng rng(21);
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.4),
                                                 RealVector::Zero(3));
        const Index n = sp.dim();
        Matrix h = sp.v;
        Matrix h0 = Matrix::Zero(n, n);
        for (Index i = 0; i < n; ++i) {
            h(i, i) += sp.pair_energy[i];
            h0(i, i) = sp.pair_energy[i];
        }
        for (int trial = 0; trial < 5; ++trial) {
            const Complex zr(4.0 + 6.0 * rng.uniform(), 0.5 + rng.uniform());
            const Matrix full = (zr * Matrix::Identity(n, n) - h).inverse();
            const Matrix free = (zr * Matrix::Identity(n, n) - h0).inverse();
            const Matrix t = t_matrix(sp, zr).t;
            CHECK(max_abs(full - (free + free * t * free)) < 1e-10);
        }
    }
}

TEST_CASE("effective interaction: Born limit, hermiticity, eta sensitivity") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
    const auto reg = default_regularization(basis);

    SUBCASE("approaches the symmetrized bare tensor at weak coupling") {
        const auto unit = gaussian_tensor(basis, 1.0);
        const auto space = make_fock_space(basis, 2);
        std::vector<double> lambdas = {1e-2, 1e-3, 1e-4};
        std::vector<double> defects;
        for (double lam : lambdas) {
            const auto t = scaled(unit, lam);
            const auto sp = build_two_particle_space(basis, t, RealVector::Zero(3));
            const auto veff = effective_interaction(sp, reg.eta);
            // Compare as operators: only the symmetrized part of the bare
            // tensor is visible to the pair dynamics.
            const Matrix defect_op =
                two_body_operator(space, veff) - two_body_operator(space, t);
            defects.push_back(max_abs(defect_op));
        }
        const double order = fitted_order(lambdas, defects);
        CHECK(order == doctest::Approx(2.0).epsilon(0.05));
    }

    SUBCASE("hermiticity holds to 1e-12 for generic occupations") {
        Rng rng(4);
        RealVector nbar(3);
        for (int f = 0; f < 3; ++f) nbar[f] = 0.7 * rng.uniform();
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.5), nbar);
        const auto veff = effective_interaction(sp, reg.eta);
        for (int l1 = 0; l1 < 3; ++l1)
            for (int l2 = 0; l2 < 3; ++l2)
                for (int f2 = 0; f2 < 3; ++f2)
                    for (int f1 = 0; f1 < 3; ++f1)
                        CHECK(std::abs(veff.at(l1, l2, f2, f1) -
                                       std::conj(veff.at(f1, f2, l2, l1))) < 1e-12);
    }

    SUBCASE("doubling eta moves the effective interaction only mildly") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.3),
                                                 RealVector::Zero(3));
        const auto v1 = effective_interaction(sp, reg.eta);
        const auto v2 = effective_interaction(sp, 2.0 * reg.eta);
        double change = 0.0;
        for (std::size_t i = 0; i < v1.data.size(); ++i)
            change = std::max(change, std::abs(v1.data[i] - v2.data[i]));
        CHECK(change < 0.2 * v1.max_entry());
    }
}

TEST_CASE("gamma operator: scaling, conservation, positivity") {
    const auto basis = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
    const auto space = make_fock_space(basis, 2);
    const auto reg = default_regularization(basis);

    SUBCASE("second-order scaling in the coupling") {
        const auto unit = gaussian_tensor(basis, 1.0);
        std::vector<double> lambdas = {1e-2, 1e-3, 1e-4};
        std::vector<double> norms;
        for (double lam : lambdas) {
            const auto sp =
                build_two_particle_space(basis, scaled(unit, lam), RealVector::Zero(2));
            norms.push_back(max_abs(gamma_operator(space, sp, reg.eta).op.matrix));
        }
        CHECK(fitted_order(lambdas, norms) == doctest::Approx(2.0).epsilon(0.05));
    }

    SUBCASE("commutes with total number and is PSD within tolerance") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.2),
                                                 RealVector::Zero(2));
        const auto res = gamma_operator(space, sp, reg.eta);
        CHECK(max_abs(commutator(res.op.matrix, total_number_operator(space))) < 1e-12);
        CHECK(res.psd_within_tolerance);
        CHECK(hermiticity_defect(res.op.matrix) < 1e-12);
    }
}

TEST_CASE("jump operators: zero coupling, number bookkeeping, gamma consistency") {
    const auto basis = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
    const auto space = make_fock_space(basis, 2);
    const auto reg = default_regularization(basis);

    SUBCASE("vanish with the interaction") {
        const auto sp = build_two_particle_space(basis, zero_tensor(2), RealVector::Zero(2));
        const auto fam = build_jump_operators(space, sp, reg.eta, reg.eps);
        for (const auto& r : fam.ops) CHECK(max_abs(r) == 0.0);
    }

    SUBCASE("R†R conserves particle number; each R lowers N by two") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.3),
                                                 RealVector::Zero(2));
        const auto fam = build_jump_operators(space, sp, reg.eta, reg.eps);
        const Matrix nt = total_number_operator(space);
        for (const auto& r : fam.ops) {
            CHECK(max_abs(commutator(Matrix(r.adjoint() * r), nt)) < 1e-12);
            // N̂ R − R N̂ = 2 R (lowers the sector by two).
            CHECK(max_abs(Matrix(nt * r - r * nt + 2.0 * r)) < 1e-12);
        }
    }

    SUBCASE("invalid regularization ordering is rejected") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.3),
                                                 RealVector::Zero(2));
        CHECK_THROWS_AS(build_jump_operators(space, sp, reg.eps, reg.eta),
                        std::invalid_argument);
    }

    SUBCASE("gamma_from_jumps approximates gamma and the defect shrinks on the path") {
        const auto sp = build_two_particle_space(basis, gaussian_tensor(basis, 0.15),
                                                 RealVector::Zero(2));
        // Documented refinement path: eta fixed at the default, eps stepped
        // up toward eta/2 (the small-eps end is dominated by the discrete
        // on-shell terms, see the acceptance run).
        std::vector<double> defects;
        for (double fraction : {0.02, 0.08, 0.32}) {
            const double eps = fraction * reg.eta;
            const auto fam = build_jump_operators(space, sp, reg.eta, eps);
            const Matrix g2 = gamma_from_jumps(fam);
            const Matrix g = gamma_operator(space, sp, reg.eta).op.matrix;
            defects.push_back(max_abs(g2 - g) / std::max(max_abs(g), 1e-300));
        }
        CHECK(defects[1] < defects[0]);
        CHECK(defects[2] < defects[1]);
    }
}

TEST_CASE("exact-operator pauli mode matches mean field where factors are trivial") {
    const auto basis = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
    const auto space = make_fock_space(basis, 2);
    const auto tensor = gaussian_tensor(basis, 0.25);
    const auto reg = default_regularization(basis);

    // At N_max = 2 every annihilated intermediate state is the vacuum, so the
    // occupation-resolved factors are identically one = mean field at nbar 0.
    const auto sp = build_two_particle_space(basis, tensor, RealVector::Zero(2));
    const Matrix g_mf = gamma_operator(space, sp, reg.eta).op.matrix;
    const Matrix g_ex = gamma_operator_exact(space, tensor, reg.eta);
    CHECK(max_abs(g_mf - g_ex) < 1e-12);

    const auto fam_mf = build_jump_operators(space, sp, reg.eta, reg.eps);
    const auto fam_ex = build_jump_operators_exact(space, tensor, reg.eta, reg.eps);
    REQUIRE(fam_mf.ops.size() == fam_ex.ops.size());
    for (std::size_t i = 0; i < fam_mf.ops.size(); ++i)
        CHECK(max_abs(fam_mf.ops[i] - fam_ex.ops[i]) < 1e-12);

    // With three particles the intermediate occupations differ from the mean
    // field; record that the modes genuinely differ.
    const auto space3 = make_fock_space(basis, 3);
    const auto sp3 = build_two_particle_space(basis, tensor, RealVector::Constant(2, 0.4));
    const Matrix g3_mf = gamma_operator(space3, sp3, reg.eta).op.matrix;
    const Matrix g3_ex = gamma_operator_exact(space3, tensor, reg.eta);
    CHECK(max_abs(g3_mf - g3_ex) > 1e-8);
}
