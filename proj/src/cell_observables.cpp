#include "fockdyn/cell_observables.hpp"

#include <cmath>
#include <stdexcept>

#include "fockdyn/linalg.hpp"

namespace fockdyn {

Matrix CellObservables::mass_coeff(int c) const { return mass * overlap[c]; }

Matrix CellObservables::momentum_coeff(int c, double v) const {
    return Complex(0.0, 0.5 * hbar) * antisym[c] - (mass * v) * overlap[c];
}

Matrix CellObservables::energy_coeff(int c, double v) const {
    // Ê_c(v) = Ê_c(0) − v P̂_c(0) + v²/(2m) M̂_c, one-body part.
    return (hbar * hbar / (2.0 * mass)) * kinetic[c] -
           v * (Complex(0.0, 0.5 * hbar) * antisym[c]) + (0.5 * mass * v * v) * overlap[c];
}

namespace {

void materialize(const FockSpace& space, CellObservables& obs) {
    const int c_count = obs.cell_count;
    obs.energy.resize(c_count);
    obs.mass_op.resize(c_count);
    obs.momentum.resize(c_count);
    obs.energy_lab.resize(c_count);
    obs.momentum_lab.resize(c_count);
    for (int c = 0; c < c_count; ++c) {
        const Matrix w2 = two_body_operator(space, obs.pair_energy[c]);
        const double v = obs.velocity[c];
        obs.mass_op[c] = hermitian_operator(one_body_operator(space, obs.mass_coeff(c)));
        obs.energy_lab[c] =
            hermitian_operator(one_body_operator(space, obs.energy_coeff(c, 0.0)) + w2);
        obs.momentum_lab[c] =
            hermitian_operator(one_body_operator(space, obs.momentum_coeff(c, 0.0)));
        obs.energy[c] = hermitian_operator(obs.energy_lab[c].matrix -
                                           v * obs.momentum_lab[c].matrix +
                                           (v * v / (2.0 * obs.mass)) * obs.mass_op[c].matrix);
        obs.momentum[c] =
            hermitian_operator(obs.momentum_lab[c].matrix - v * obs.mass_op[c].matrix);
    }
    std::vector<Matrix> currents = interface_currents(obs.hamiltonian, obs.mass_op, obs.hbar);
    obs.mass_current.clear();
    for (auto& j : currents) obs.mass_current.push_back(hermitian_operator(std::move(j)));
}

}  // namespace

CellObservables build_cell_observables(const FockSpace& space, const InteractionTensor& tensor,
                                       const Potential& potential, int cells,
                                       const RealVector& velocity, int quad_order) {
    if (cells < 1) throw std::invalid_argument("cell_observables: cells must be >= 1");
    if (velocity.size() != cells)
        throw std::invalid_argument("cell_observables: velocity field size mismatch");
    const auto& basis = space.basis;
    const int m = basis.mode_count;
    if (quad_order < 2 * m)
        throw std::invalid_argument("cell_observables: quad_order must be >= 2M");

    CellObservables obs;
    obs.cell_count = cells;
    obs.box_length = basis.box_length;
    obs.mass = basis.mass;
    obs.hbar = basis.hbar;
    obs.velocity = velocity;
    obs.edges.resize(cells + 1);
    for (int c = 0; c <= cells; ++c) obs.edges[c] = basis.box_length * c / cells;

    // Per-cell one-body integrals by Gauss–Legendre on each cell.
    obs.overlap.assign(cells, Matrix::Zero(m, m));
    obs.kinetic.assign(cells, Matrix::Zero(m, m));
    obs.antisym.assign(cells, Matrix::Zero(m, m));
    for (int c = 0; c < cells; ++c) {
        const auto q = gauss_legendre(quad_order, obs.edges[c], obs.edges[c + 1]);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const double x = q.nodes[i], w = q.weights[i];
            for (int h = 0; h < m; ++h) {
                const double uh = basis.mode_value(h, x), dh = basis.mode_derivative(h, x);
                for (int k = 0; k < m; ++k) {
                    const double uk = basis.mode_value(k, x), dk = basis.mode_derivative(k, x);
                    obs.overlap[c](h, k) += w * uh * uk;
                    obs.kinetic[c](h, k) += w * dh * dk;
                    obs.antisym[c](h, k) += w * (dh * uk - uh * dk);
                }
            }
        }
    }

    // Redistribute the (tiny) quadrature defect so the cell sums reproduce
    // the analytic totals exactly: Σ_c S = 1 and Σ_c K = 2mE_f/ħ² δ.
    Matrix s_total = Matrix::Zero(m, m), k_total = Matrix::Zero(m, m);
    for (int c = 0; c < cells; ++c) {
        s_total += obs.overlap[c];
        k_total += obs.kinetic[c];
    }
    Matrix k_exact = Matrix::Zero(m, m);
    for (int f = 0; f < m; ++f)
        k_exact(f, f) = 2.0 * basis.mass * basis.energies[f] / (basis.hbar * basis.hbar);
    const Matrix s_defect = (s_total - Matrix::Identity(m, m)) / double(cells);
    const Matrix k_defect = (k_total - k_exact) / double(cells);
    for (int c = 0; c < cells; ++c) {
        obs.overlap[c] -= s_defect;
        obs.kinetic[c] -= k_defect;
    }

    // Midpoint-assigned interaction share on the same global quadrature grid
    // as the tensor: cell c collects node pairs with (x+y)/2 inside it.
    obs.pair_energy.assign(cells, zero_tensor(m));
    {
        const auto q = gauss_legendre(quad_order, 0.0, basis.box_length);
        const int n = quad_order;
        RealMatrix u(m, n);
        for (int f = 0; f < m; ++f)
            for (int i = 0; i < n; ++i) u(f, i) = basis.mode_value(f, q.nodes[i]);
        RealMatrix p(m * m, n);
        for (int l = 0; l < m; ++l)
            for (int f = 0; f < m; ++f)
                for (int i = 0; i < n; ++i) p(l * m + f, i) = u(l, i) * u(f, i);
        for (int c = 0; c < cells; ++c) {
            RealMatrix g = RealMatrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double mid = 0.5 * (q.nodes[i] + q.nodes[j]);
                    const bool inside =
                        mid >= obs.edges[c] && (mid < obs.edges[c + 1] || c == cells - 1);
                    if (!inside) continue;
                    g(i, j) = q.weights[i] * q.weights[j] *
                              potential(std::abs(q.nodes[i] - q.nodes[j]));
                }
            const RealMatrix a = p * g * p.transpose();
            for (int l1 = 0; l1 < m; ++l1)
                for (int l2 = 0; l2 < m; ++l2)
                    for (int f2 = 0; f2 < m; ++f2)
                        for (int f1 = 0; f1 < m; ++f1)
                            obs.pair_energy[c].at(l1, l2, f2, f1) = a(l1 * m + f1, l2 * m + f2);
        }
        // Distribute the residual against the (symmetrized) tensor so the
        // cell shares sum to it exactly.
        InteractionTensor residual = tensor;
        for (int c = 0; c < cells; ++c)
            for (std::size_t i = 0; i < residual.data.size(); ++i)
                residual.data[i] -= obs.pair_energy[c].data[i];
        for (int c = 0; c < cells; ++c)
            for (std::size_t i = 0; i < residual.data.size(); ++i)
                obs.pair_energy[c].data[i] += residual.data[i] / double(cells);
    }

    obs.hamiltonian = build_hamiltonian(space, tensor);
    materialize(space, obs);
    return obs;
}

CellObservables with_velocity(const CellObservables& obs, const RealVector& velocity) {
    if (velocity.size() != obs.cell_count)
        throw std::invalid_argument("with_velocity: velocity field size mismatch");
    CellObservables out = obs;
    out.velocity = velocity;
    for (int c = 0; c < out.cell_count; ++c) {
        const double v = velocity[c];
        out.energy[c] = hermitian_operator(out.energy_lab[c].matrix -
                                           v * out.momentum_lab[c].matrix +
                                           (v * v / (2.0 * out.mass)) * out.mass_op[c].matrix);
        out.momentum[c] =
            hermitian_operator(out.momentum_lab[c].matrix - v * out.mass_op[c].matrix);
    }
    return out;
}

std::vector<Matrix> interface_currents(const Matrix& hamiltonian,
                                       const std::vector<Operator>& cell_ops, double hbar) {
    const int cells = static_cast<int>(cell_ops.size());
    std::vector<Matrix> currents;
    currents.reserve(cells + 1);
    Matrix partial = Matrix::Zero(hamiltonian.rows(), hamiltonian.cols());
    currents.push_back(Matrix::Zero(hamiltonian.rows(), hamiltonian.cols()));
    for (int c = 0; c < cells; ++c) {
        partial += cell_ops[c].matrix;
        currents.push_back(Complex(0.0, 1.0 / hbar) * commutator(partial, hamiltonian));
    }
    return currents;
}

}  // namespace fockdyn
