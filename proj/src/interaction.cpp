#include "fockdyn/interaction.hpp"

#include <cmath>
#include <stdexcept>

#include "fockdyn/errors.hpp"
#include "fockdyn/linalg.hpp"

namespace fockdyn {

double InteractionTensor::max_entry() const {
    double m = 0.0;
    for (const auto& v : data) m = std::max(m, std::abs(v));
    return m;
}

InteractionTensor zero_tensor(int modes) {
    InteractionTensor t;
    t.modes = modes;
    t.data.assign(static_cast<std::size_t>(modes) * modes * modes * modes, Complex(0.0, 0.0));
    return t;
}

namespace {

// Raw quadrature pass: V = P G P^T with P[(l,f)][i] = u_l(x_i) u_f(x_i)
// and G[i][j] = w_i w_j V(|x_i − x_j|).
InteractionTensor raw_tensor(const ModeBasis& basis, const Potential& potential, int order) {
    const int m = basis.mode_count;
    const auto quad = gauss_legendre(order, 0.0, basis.box_length);

    RealMatrix u(m, order);
    for (int f = 0; f < m; ++f)
        for (int i = 0; i < order; ++i) u(f, i) = basis.mode_value(f, quad.nodes[i]);

    RealMatrix p(m * m, order);
    for (int l = 0; l < m; ++l)
        for (int f = 0; f < m; ++f)
            for (int i = 0; i < order; ++i) p(l * m + f, i) = u(l, i) * u(f, i);

    RealMatrix g(order, order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            g(i, j) = quad.weights[i] * quad.weights[j] *
                      potential(std::abs(quad.nodes[i] - quad.nodes[j]));

    const RealMatrix a = p * g * p.transpose();

    InteractionTensor t = zero_tensor(m);
    for (int l1 = 0; l1 < m; ++l1)
        for (int l2 = 0; l2 < m; ++l2)
            for (int f2 = 0; f2 < m; ++f2)
                for (int f1 = 0; f1 < m; ++f1)
                    t.at(l1, l2, f2, f1) = a(l1 * m + f1, l2 * m + f2);
    return t;
}

void symmetrize(InteractionTensor& t) {
    const int m = t.modes;
    double defect = 0.0;
    InteractionTensor sym = zero_tensor(m);
    for (int l1 = 0; l1 < m; ++l1)
        for (int l2 = 0; l2 < m; ++l2)
            for (int f2 = 0; f2 < m; ++f2)
                for (int f1 = 0; f1 < m; ++f1) {
                    const Complex v = 0.25 * (t.at(l1, l2, f2, f1) + t.at(l2, l1, f1, f2) +
                                              std::conj(t.at(f1, f2, l2, l1)) +
                                              std::conj(t.at(f2, f1, l1, l2)));
                    defect = std::max(defect, std::abs(v - t.at(l1, l2, f2, f1)));
                    sym.at(l1, l2, f2, f1) = v;
                }
    t.data = std::move(sym.data);
    t.symmetrization_defect = defect;
}

}  // namespace

InteractionTensor interaction_tensor(const ModeBasis& basis, const Potential& potential,
                                     int quad_order) {
    if (quad_order < 2 * basis.mode_count)
        throw std::invalid_argument("interaction_tensor: quad_order must be >= 2M");

    InteractionTensor t = raw_tensor(basis, potential, quad_order);
    const InteractionTensor probe = raw_tensor(basis, potential, quad_order + 8);
    double defect = 0.0;
    for (std::size_t i = 0; i < t.data.size(); ++i)
        defect = std::max(defect, std::abs(t.data[i] - probe.data[i]));
    t.quadrature_defect = defect;
    if (defect > 1e-6)
        throw AccuracyFailure("interaction_tensor: quadrature defect " + std::to_string(defect) +
                                  " exceeds 1e-6; increase quad_order",
                              2 * quad_order);
    symmetrize(t);
    return t;
}

Matrix two_body_operator(const FockSpace& space, const InteractionTensor& tensor) {
    const int m = space.basis.mode_count;
    if (tensor.modes != m)
        throw std::invalid_argument("two_body_operator: tensor mode count mismatch");
    const bool fermi = space.basis.statistics == Statistics::fermi;
    Matrix op = Matrix::Zero(space.dimension, space.dimension);

    auto annihilate = [&](std::vector<int>& occ, int f, double& amp) -> bool {
        if (occ[f] == 0) return false;
        if (fermi) {
            int string = 0;
            for (int g = 0; g < f; ++g) string += occ[g];
            amp *= (string % 2 == 0) ? 1.0 : -1.0;
        } else {
            amp *= std::sqrt(static_cast<double>(occ[f]));
        }
        occ[f] -= 1;
        return true;
    };
    auto create = [&](std::vector<int>& occ, int f, double& amp) -> bool {
        if (fermi) {
            if (occ[f] == 1) return false;
            int string = 0;
            for (int g = 0; g < f; ++g) string += occ[g];
            amp *= (string % 2 == 0) ? 1.0 : -1.0;
        } else {
            amp *= std::sqrt(static_cast<double>(occ[f] + 1));
        }
        occ[f] += 1;
        return true;
    };

    for (Index col = 0; col < space.dimension; ++col) {
        const auto& occ = space.occupation(col);
        for (int f1 = 0; f1 < m; ++f1) {
            std::vector<int> occ1 = occ;
            double amp1 = 1.0;
            if (!annihilate(occ1, f1, amp1)) continue;
            for (int f2 = 0; f2 < m; ++f2) {
                std::vector<int> occ2 = occ1;
                double amp2 = amp1;
                if (!annihilate(occ2, f2, amp2)) continue;
                for (int l2 = 0; l2 < m; ++l2) {
                    std::vector<int> occ3 = occ2;
                    double amp3 = amp2;
                    if (!create(occ3, l2, amp3)) continue;
                    for (int l1 = 0; l1 < m; ++l1) {
                        const Complex v = tensor.at(l1, l2, f2, f1);
                        if (v == Complex(0.0, 0.0)) continue;
                        std::vector<int> occ4 = occ3;
                        double amp4 = amp3;
                        if (!create(occ4, l1, amp4)) continue;
                        const Index row = space.index_of(occ4);
                        if (row < 0) continue;
                        op(row, col) += 0.5 * v * amp4;
                    }
                }
            }
        }
    }
    return op;
}

Matrix build_hamiltonian(const FockSpace& space, const InteractionTensor& tensor) {
    Matrix h = two_body_operator(space, tensor);
    for (Index i = 0; i < space.dimension; ++i) {
        const auto& occ = space.occupation(i);
        double e = 0.0;
        for (int f = 0; f < space.basis.mode_count; ++f) e += occ[f] * space.basis.energies[f];
        h(i, i) += e;
    }
    return h;
}

}  // namespace fockdyn
