#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fockdyn/cell_observables.hpp"
#include "fockdyn/errors.hpp"
#include "fockdyn/fock_space.hpp"
#include "fockdyn/interaction.hpp"
#include "fockdyn/linalg.hpp"
#include "fockdyn/phase_space.hpp"
#include "test_helpers.hpp"

using namespace fockdyn;
using testing_support::Rng;

namespace {

// Exact unitary evolution used as a local oracle.
Matrix evolve_state(const Matrix& h, const Matrix& rho, double t, double hbar) {
    const auto [eigs, vecs] = hermitian_eig(h);
    Vector phase(eigs.size());
    for (Index i = 0; i < eigs.size(); ++i)
        phase[i] = std::exp(Complex(0.0, -eigs[i] * t / hbar));
    const Matrix u = vecs * phase.asDiagonal() * vecs.adjoint();
    return u * rho * u.adjoint();
}

// Closed-form ∫_0^L u_a u_b u_c u_d dx for sine modes (1-based indices).
double quartic_mode_integral(int a, int b, int c, int d, double box) {
    auto cosint = [](int p, int q) -> double {
        if (p == 0 && q == 0) return std::numbers::pi;
        if (std::abs(p) == std::abs(q)) return 0.5 * std::numbers::pi;
        return 0.0;
    };
    const double s4 = 0.25 * (cosint(a - b, c - d) - cosint(a - b, c + d) -
                              cosint(a + b, c - d) + cosint(a + b, c + d));
    return (4.0 / (box * box)) * (box / std::numbers::pi) * s4;
}

InteractionTensor random_valid_tensor(int modes, Rng& rng) {
    InteractionTensor t = zero_tensor(modes);
    for (int l1 = 0; l1 < modes; ++l1)
        for (int l2 = 0; l2 < modes; ++l2)
            for (int f2 = 0; f2 < modes; ++f2)
                for (int f1 = 0; f1 < modes; ++f1) t.at(l1, l2, f2, f1) = rng.cgaussian();
    // Enforce pair symmetry and hermiticity.
    InteractionTensor s = zero_tensor(modes);
    for (int l1 = 0; l1 < modes; ++l1)
        for (int l2 = 0; l2 < modes; ++l2)
            for (int f2 = 0; f2 < modes; ++f2)
                for (int f1 = 0; f1 < modes; ++f1)
                    s.at(l1, l2, f2, f1) =
                        0.25 * (t.at(l1, l2, f2, f1) + t.at(l2, l1, f1, f2) +
                                std::conj(t.at(f1, f2, l2, l1)) + std::conj(t.at(f2, f1, l1, l2)));
    return s;
}

}  // namespace

TEST_CASE("interaction tensor: zero potential, symmetry, quadrature convergence") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);

    SUBCASE("zero strength gives the zero tensor") {
        const auto t = interaction_tensor(basis, make_potential(Potential::Kind::gaussian, 0.0, 0.2),
                                          24);
        CHECK(t.max_entry() == 0.0);
    }

    SUBCASE("declared invariants hold after symmetrization") {
        const auto t = interaction_tensor(
            basis, make_potential(Potential::Kind::gaussian, 0.7, 0.25), 32);
        for (int l1 = 0; l1 < 3; ++l1)
            for (int l2 = 0; l2 < 3; ++l2)
                for (int f2 = 0; f2 < 3; ++f2)
                    for (int f1 = 0; f1 < 3; ++f1) {
                        CHECK(std::abs(t.at(l1, l2, f2, f1) - t.at(l2, l1, f1, f2)) < 1e-14);
                        CHECK(std::abs(t.at(l1, l2, f2, f1) -
                                       std::conj(t.at(f1, f2, l2, l1))) < 1e-14);
                    }
        CHECK(t.symmetrization_defect < 1e-13);
    }

    SUBCASE("doubling the order changes nothing at working precision") {
        const auto basis2 = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
        const auto pot = make_potential(Potential::Kind::gaussian, 0.4, 0.3);
        const auto t1 = interaction_tensor(basis2, pot, 24);
        const auto t2 = interaction_tensor(basis2, pot, 48);
        double diff = 0.0;
        for (std::size_t i = 0; i < t1.data.size(); ++i)
            diff = std::max(diff, std::abs(t1.data[i] - t2.data[i]));
        CHECK(diff < 1e-10);
        CHECK(t1.quadrature_defect < 1e-10);
    }

    SUBCASE("narrow contact potential approaches the closed-form sine integral") {
        const auto basis2 = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
        const double lambda = 0.8, box = 2.0;
        const double r0 = 0.02 * box;
        const auto coarse = interaction_tensor(
            basis2, make_potential(Potential::Kind::contact, lambda, r0), 256);
        const auto fine = interaction_tensor(
            basis2, make_potential(Potential::Kind::contact, lambda, 0.5 * r0), 256);
        for (int l1 = 0; l1 < 2; ++l1)
            for (int l2 = 0; l2 < 2; ++l2)
                for (int f2 = 0; f2 < 2; ++f2)
                    for (int f1 = 0; f1 < 2; ++f1) {
                        const Complex extrap = (4.0 * fine.at(l1, l2, f2, f1) -
                                                coarse.at(l1, l2, f2, f1)) / 3.0;
                        const double exact = lambda * quartic_mode_integral(
                                                          l1 + 1, l2 + 1, f2 + 1, f1 + 1, box);
                        CHECK(std::abs(extrap - exact) < 1e-3 * lambda);
                    }
    }

    SUBCASE("too-low quadrature order is rejected up front") {
        CHECK_THROWS_AS(
            interaction_tensor(basis, make_potential(Potential::Kind::gaussian, 1.0, 0.2), 4),
            std::invalid_argument);
    }
}

TEST_CASE("hamiltonian: free limit, mass conservation, two-particle oracle") {
    SUBCASE("free Hamiltonian is diagonal with occupation sums") {
        const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
        const auto space = make_fock_space(basis, 2);
        const Matrix h = build_hamiltonian(space, zero_tensor(3));
        for (Index i = 0; i < space.dimension; ++i) {
            const auto& occ = space.occupation(i);
            double e = 0.0;
            for (int f = 0; f < 3; ++f) e += occ[f] * basis.energies[f];
            CHECK(std::abs(h(i, i) - Complex(e, 0.0)) < 1e-13);
        }
        Matrix off = h;
        off.diagonal().setZero();
        CHECK(max_abs(off) == 0.0);
    }

    SUBCASE("random valid tensors conserve particle number") {
        Rng rng(11);
        for (auto stat : {Statistics::bose, Statistics::fermi}) {
            const auto space = make_fock_space(make_mode_basis(3, 1.0, 1.0, 1.0, stat), 2);
            const auto t = random_valid_tensor(3, rng);
            const Matrix h = build_hamiltonian(space, t);
            CHECK(hermiticity_defect(h) < 1e-12);
            CHECK(max_abs(commutator(h, total_number_operator(space))) < 1e-12);
        }
    }

    SUBCASE("two-boson ground energy matches the first-quantized problem") {
        const int m = 2;
        const auto basis = make_mode_basis(m, 2.0, 1.0, 1.0, Statistics::bose);
        const auto space = make_fock_space(basis, 2);
        const auto tensor = interaction_tensor(
            basis, make_potential(Potential::Kind::gaussian, 0.1, 0.2), 40);
        const Matrix h = build_hamiltonian(space, tensor);

        // First-quantized oracle on the product space, restricted to the
        // symmetric subspace.
        Matrix h2 = Matrix::Zero(m * m, m * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                h2(a * m + b, a * m + b) += basis.energies[a] + basis.energies[b];
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d)
                        h2(a * m + b, c * m + d) += tensor.at(a, b, d, c);
            }
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) pairs.emplace_back(a, b);
        Matrix q = Matrix::Zero(m * m, static_cast<Index>(pairs.size()));
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [a, b] = pairs[k];
            if (a == b) {
                q(a * m + b, k) = 1.0;
            } else {
                q(a * m + b, k) = 1.0 / std::sqrt(2.0);
                q(b * m + a, k) = 1.0 / std::sqrt(2.0);
            }
        }
        const Matrix h2_sym = q.adjoint() * h2 * q;
        const auto [pair_eigs, pair_vecs] = hermitian_eig(h2_sym);

        // Sector-2 block of the Fock Hamiltonian.
        const Index off = space.sector_offset[2];
        const Index dim2 = space.sector_dim(2);
        const Matrix block = h.block(off, off, dim2, dim2);
        const auto [fock_eigs, fock_vecs] = hermitian_eig(block);

        REQUIRE(pair_eigs.size() == fock_eigs.size());
        for (Index i = 0; i < pair_eigs.size(); ++i)
            CHECK(fock_eigs[i] == doctest::Approx(pair_eigs[i]).epsilon(1e-10));
    }
}

TEST_CASE("cell observables: partitions, currents, velocity dress") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
    const auto space = make_fock_space(basis, 2);
    const auto pot = make_potential(Potential::Kind::gaussian, 0.3, 0.2);
    const auto tensor = interaction_tensor(basis, pot, 40);

    SUBCASE("single cell at rest reproduces the global operators") {
        const auto obs = build_cell_observables(space, tensor, pot, 1, RealVector::Zero(1), 40);
        CHECK(max_abs(obs.energy[0].matrix - obs.hamiltonian) < 1e-12);
        CHECK(max_abs(obs.mass_op[0].matrix - basis.mass * total_number_operator(space)) < 1e-12);
        // Total momentum operator: ⟨u_h|−iħ∂|u_k⟩ assembled directly.
        Matrix pcoeff = Matrix::Zero(3, 3);
        const auto q = gauss_legendre(60, 0.0, basis.box_length);
        for (int h = 0; h < 3; ++h)
            for (int k = 0; k < 3; ++k) {
                double ip = 0.0;
                for (std::size_t i = 0; i < q.nodes.size(); ++i)
                    ip += q.weights[i] * basis.mode_value(h, q.nodes[i]) *
                          basis.mode_derivative(k, q.nodes[i]);
                pcoeff(h, k) = Complex(0.0, -basis.hbar) * ip;
            }
        CHECK(max_abs(obs.momentum[0].matrix - one_body_operator(space, pcoeff)) < 1e-10);
        // Both interface currents vanish: total mass is conserved.
        CHECK(max_abs(obs.mass_current[0].matrix) == 0.0);
        CHECK(max_abs(obs.mass_current[1].matrix) < 1e-12);
    }

    SUBCASE("cell sums and continuity hold for a random velocity field") {
        Rng rng(5);
        const int cells = 3;
        RealVector v(cells);
        for (int c = 0; c < cells; ++c) v[c] = 0.3 * rng.gaussian();
        const auto obs = build_cell_observables(space, tensor, pot, cells, v, 40);

        Matrix mass_sum = Matrix::Zero(space.dimension, space.dimension);
        Matrix energy_lab_sum = Matrix::Zero(space.dimension, space.dimension);
        for (int c = 0; c < cells; ++c) {
            mass_sum += obs.mass_op[c].matrix;
            energy_lab_sum += obs.energy_lab[c].matrix;
        }
        CHECK(max_abs(mass_sum - basis.mass * total_number_operator(space)) < 1e-12);
        CHECK(max_abs(energy_lab_sum - obs.hamiltonian) < 1e-12);

        // Discrete continuity: (i/ħ)[Ĥ, M̂_c] = J_c − J_{c+1} exactly.
        for (int c = 0; c < cells; ++c) {
            const Matrix lhs =
                Complex(0.0, 1.0 / basis.hbar) * commutator(obs.hamiltonian, obs.mass_op[c].matrix);
            const Matrix rhs = obs.mass_current[c].matrix - obs.mass_current[c + 1].matrix;
            CHECK(max_abs(lhs - rhs) < 1e-12);
        }
        CHECK(max_abs(obs.mass_current[cells].matrix) < 1e-12);

        // The underlying multiplication operators commute; their compressions
        // onto M modes commute only up to a truncation defect. Track it so a
        // construction bug (which would be O(1)) cannot hide behind it.
        for (int a = 0; a < cells; ++a)
            for (int b = 0; b < cells; ++b) {
                const double defect =
                    max_abs(commutator(obs.mass_op[a].matrix, obs.mass_op[b].matrix));
                CHECK(defect < 0.2 * basis.mass);
            }

        // Velocity shift is linear: P̂_c(v+w) = P̂_c(v) − w M̂_c.
        RealVector vw = v;
        const double w = 0.17;
        for (int c = 0; c < cells; ++c) vw[c] += w;
        const auto shifted = with_velocity(obs, vw);
        for (int c = 0; c < cells; ++c) {
            CHECK(max_abs(shifted.momentum[c].matrix -
                          (obs.momentum[c].matrix - w * obs.mass_op[c].matrix)) < 1e-12);
        }
    }

    SUBCASE("free two-cell current oscillates at the Bohr frequency") {
        const auto basis2 = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
        const auto space2 = make_fock_space(basis2, 1);
        const auto zero = zero_tensor(2);
        const auto obs = build_cell_observables(space2, zero,
                                                make_potential(Potential::Kind::gaussian, 0.0, 0.2),
                                                2, RealVector::Zero(2), 40);
        // Single particle in (|1⟩ + |2⟩)/√2.
        Vector psi = Vector::Zero(space2.dimension);
        psi[space2.index_of({1, 0})] = 1.0 / std::sqrt(2.0);
        psi[space2.index_of({0, 1})] = 1.0 / std::sqrt(2.0);
        const Matrix rho = psi * psi.adjoint();
        const Matrix j_mid = obs.mass_current[1].matrix;
        const double omega = (basis2.energies[1] - basis2.energies[0]) / basis2.hbar;
        const double period = 2.0 * std::numbers::pi / omega;

        double amplitude = 0.0;
        for (double t : {0.0, 0.31, 0.62}) {
            const double jt = real_expectation(j_mid, evolve_state(obs.hamiltonian, rho, t, 1.0));
            const double j_half =
                real_expectation(j_mid, evolve_state(obs.hamiltonian, rho, t + 0.5 * period, 1.0));
            const double j_full =
                real_expectation(j_mid, evolve_state(obs.hamiltonian, rho, t + period, 1.0));
            CHECK(std::abs(jt + j_half) < 1e-10);
            CHECK(std::abs(jt - j_full) < 1e-10);
            amplitude = std::max(amplitude, std::abs(jt));
        }
        CHECK(amplitude > 1e-3);  // the oscillation is actually present
    }

    SUBCASE("mode-level field equation under exact evolution") {
        Rng rng(23);
        for (auto stat : {Statistics::bose, Statistics::fermi}) {
            const auto b = make_mode_basis(2, 2.0, 1.0, 1.0, stat);
            const auto sp = make_fock_space(b, 2);
            const auto tn = interaction_tensor(
                b, make_potential(Potential::Kind::gaussian, 0.08, 0.2), 32);
            const Matrix h = build_hamiltonian(sp, tn);
            const Vector psi = rng.state_vector(sp.dimension);
            const Matrix rho = psi * psi.adjoint();
            const Matrix af = annihilator(sp, 0);
            const double dt = 1e-5;
            const Complex forward = expectation(af, evolve_state(h, rho, dt, 1.0));
            const Complex backward = expectation(af, evolve_state(h, rho, -dt, 1.0));
            const Complex ddt = (forward - backward) / (2.0 * dt);
            const Complex rhs = Complex(0.0, -1.0) * expectation(commutator(af, h), rho);
            CHECK(std::abs(ddt - rhs) < 1e-6);
        }
    }

    SUBCASE("free commutator identity for the mode equation (bose)") {
        const auto b = make_mode_basis(2, 2.0, 1.0, 1.0, Statistics::bose);
        const auto sp = make_fock_space(b, 2);
        const auto tn =
            interaction_tensor(b, make_potential(Potential::Kind::gaussian, 0.3, 0.25), 32);
        const Matrix h = build_hamiltonian(sp, tn);
        for (int f = 0; f < 2; ++f) {
            Matrix rhs = b.energies[f] * annihilator(sp, f);
            for (int l = 0; l < 2; ++l)
                for (int f2 = 0; f2 < 2; ++f2)
                    for (int f1 = 0; f1 < 2; ++f1)
                        rhs += 0.5 * (tn.at(f, l, f2, f1) + tn.at(l, f, f1, f2)) *
                               (creator(sp, l) * annihilator(sp, f2) * annihilator(sp, f1));
            CHECK(max_abs(commutator(annihilator(sp, f), h) - rhs) < 1e-12);
        }
    }
}

TEST_CASE("phase-space density: normalization, vacuum, positivity") {
    const auto basis = make_mode_basis(3, 2.0, 1.0, 1.0, Statistics::bose);
    const auto space = make_fock_space(basis, 2);
    PhaseSpaceGridSpec spec;
    spec.nx = 12;
    spec.np = 12;
    const auto grid = build_phase_space_grid(space, spec, 40);

    SUBCASE("single particle in the lowest mode integrates to one within 5%") {
        Vector psi = Vector::Zero(space.dimension);
        psi[space.index_of({1, 0, 0})] = 1.0;
        const Matrix rho = psi * psi.adjoint();
        double total = 0.0;
        for (const auto& f : grid.f_op) total += real_expectation(f.matrix, rho) * grid.dx * grid.dp;
        CHECK(std::abs(total - 1.0) < 0.05);
    }

    SUBCASE("vacuum carries no phase-space weight") {
        Matrix rho = Matrix::Zero(space.dimension, space.dimension);
        rho(0, 0) = 1.0;
        for (const auto& f : grid.f_op) CHECK(std::abs(real_expectation(f.matrix, rho)) < 1e-14);
    }

    SUBCASE("expectations stay nonnegative on random states") {
        Rng rng(77);
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix rho = rng.density_matrix(space.dimension, 2);
            for (const auto& f : grid.f_op)
                CHECK(real_expectation(f.matrix, rho) > -1e-12);
        }
    }

    SUBCASE("rest-frame grid shifts the packet momentum by m·v") {
        RealVector v(1);
        v[0] = 0.4;
        const auto rest = build_phase_space_grid_rest(space, spec, 40, v);
        const Matrix direct = packet_coefficient(basis, rest.x[3], rest.p[5] - basis.mass * 0.4,
                                                 rest.sigma, 40);
        CHECK(max_abs(rest.coefficient(3, 5) - direct) < 1e-12);
    }
}
