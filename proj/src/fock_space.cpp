#include "fockdyn/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockdyn/errors.hpp"

namespace fockdyn {

namespace {

// Enumerate occupation vectors with total n over `modes` modes in
// lexicographic order. Fermi occupations are restricted to {0,1}.
void enumerate(int modes, int n, int cap, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
    if (modes == 1) {
        if (n <= cap) {
            current.push_back(n);
            out.push_back(current);
            current.pop_back();
        }
        return;
    }
    for (int k = 0; k <= std::min(n, cap); ++k) {
        current.push_back(k);
        enumerate(modes - 1, n - k, cap, current, out);
        current.pop_back();
    }
}

}  // namespace

FockSpace make_fock_space(const ModeBasis& basis, int max_total) {
    if (max_total < 0) throw std::invalid_argument("fock_space: max_total must be >= 0");
    if (basis.statistics == Statistics::fermi && max_total > basis.mode_count)
        throw Infeasible("fock_space: fermionic max_total exceeds mode count");

    FockSpace space;
    space.basis = basis;
    space.max_total = max_total;
    const int cap = basis.statistics == Statistics::fermi ? 1 : max_total;

    Index offset = 0;
    for (int n = 0; n <= max_total; ++n) {
        std::vector<std::vector<int>> sector;
        std::vector<int> current;
        enumerate(basis.mode_count, n, cap, current, sector);
        space.sector_offset.push_back(offset);
        for (const auto& occ : sector) space.lookup_[occ] = offset++;
        space.sectors.push_back(std::move(sector));
    }
    space.dimension = offset;
    return space;
}

int FockSpace::sector_of(Index global) const {
    int n = 0;
    for (int m = 0; m <= max_total; ++m)
        if (global >= sector_offset[m]) n = m;
    return n;
}

const std::vector<int>& FockSpace::occupation(Index global) const {
    const int n = sector_of(global);
    return sectors[n][global - sector_offset[n]];
}

Index FockSpace::index_of(const std::vector<int>& occ) const {
    auto it = lookup_.find(occ);
    return it == lookup_.end() ? Index(-1) : it->second;
}

Matrix annihilator(const FockSpace& space, int mode) {
    if (mode < 0 || mode >= space.basis.mode_count)
        throw std::invalid_argument("annihilator: mode index out of range");
    Matrix a = Matrix::Zero(space.dimension, space.dimension);
    const bool fermi = space.basis.statistics == Statistics::fermi;
    for (Index col = 0; col < space.dimension; ++col) {
        const auto& occ = space.occupation(col);
        if (occ[mode] == 0) continue;
        std::vector<int> target = occ;
        target[mode] -= 1;
        const Index row = space.index_of(target);
        if (row < 0) continue;
        if (fermi) {
            int string = 0;
            for (int g = 0; g < mode; ++g) string += occ[g];
            a(row, col) = (string % 2 == 0) ? 1.0 : -1.0;
        } else {
            a(row, col) = std::sqrt(static_cast<double>(occ[mode]));
        }
    }
    return a;
}

Matrix creator(const FockSpace& space, int mode) {
    return annihilator(space, mode).adjoint();
}

Matrix number_operator(const FockSpace& space, int mode) {
    Matrix n = Matrix::Zero(space.dimension, space.dimension);
    for (Index i = 0; i < space.dimension; ++i) n(i, i) = space.occupation(i)[mode];
    return n;
}

Matrix total_number_operator(const FockSpace& space) {
    Matrix n = Matrix::Zero(space.dimension, space.dimension);
    for (Index i = 0; i < space.dimension; ++i) n(i, i) = space.sector_of(i);
    return n;
}

Matrix sector_projector(const FockSpace& space, int n) {
    Matrix p = Matrix::Zero(space.dimension, space.dimension);
    for (Index i = 0; i < space.dimension; ++i)
        if (space.sector_of(i) == n) p(i, i) = 1.0;
    return p;
}

Matrix one_body_operator(const FockSpace& space, const Matrix& coeff) {
    const int modes = space.basis.mode_count;
    if (coeff.rows() != modes || coeff.cols() != modes)
        throw std::invalid_argument("one_body_operator: coefficient matrix has wrong shape");
    const bool fermi = space.basis.statistics == Statistics::fermi;
    Matrix op = Matrix::Zero(space.dimension, space.dimension);
    // Column-wise application of a_h† a_k avoids forming M^2 ladder products.
    for (Index col = 0; col < space.dimension; ++col) {
        const auto& occ = space.occupation(col);
        for (int k = 0; k < modes; ++k) {
            if (occ[k] == 0) continue;
            double amp_k;
            std::vector<int> mid = occ;
            if (fermi) {
                int string = 0;
                for (int g = 0; g < k; ++g) string += occ[g];
                amp_k = (string % 2 == 0) ? 1.0 : -1.0;
            } else {
                amp_k = std::sqrt(static_cast<double>(occ[k]));
            }
            mid[k] -= 1;
            for (int h = 0; h < modes; ++h) {
                if (coeff(h, k) == Complex(0.0, 0.0)) continue;
                double amp_h;
                if (fermi) {
                    if (mid[h] == 1) continue;
                    int string = 0;
                    for (int g = 0; g < h; ++g) string += mid[g];
                    amp_h = (string % 2 == 0) ? 1.0 : -1.0;
                } else {
                    amp_h = std::sqrt(static_cast<double>(mid[h] + 1));
                }
                std::vector<int> target = mid;
                target[h] += 1;
                const Index row = space.index_of(target);
                if (row < 0) continue;
                op(row, col) += coeff(h, k) * amp_k * amp_h;
            }
        }
    }
    return op;
}

}  // namespace fockdyn
