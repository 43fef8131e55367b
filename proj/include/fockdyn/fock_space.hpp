#pragma once

#include <map>
#include <vector>

#include "fockdyn/mode_basis.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

/// Occupation-number basis over all particle-number sectors 0..max_total.
/// States are ordered sector by sector; inside a sector the occupation
/// vectors (n_1,...,n_M) are enumerated in lexicographic order, so the
/// layout is stable across runs.
struct FockSpace {
    ModeBasis basis;
    int max_total = 0;
    Index dimension = 0;
    std::vector<std::vector<std::vector<int>>> sectors;  // sectors[N][i] = occupation vector
    std::vector<Index> sector_offset;                    // global index of first state in sector N

    int sector_of(Index global) const;
    const std::vector<int>& occupation(Index global) const;
    Index index_of(const std::vector<int>& occ) const;  // -1 if absent

    Index sector_dim(int n) const { return static_cast<Index>(sectors[n].size()); }

  private:
    std::map<std::vector<int>, Index> lookup_;
    friend FockSpace make_fock_space(const ModeBasis&, int);
};

FockSpace make_fock_space(const ModeBasis& basis, int max_total);

/// Ladder operators as dense matrices on the whole truncated space.
/// Annihilation maps sector N into N−1; amplitudes are sqrt(n_f) for
/// bosons and a Jordan–Wigner sign over the lexicographic mode order
/// for fermions. creator(f) is exactly annihilator(f)†.
Matrix annihilator(const FockSpace& space, int mode);
Matrix creator(const FockSpace& space, int mode);
Matrix number_operator(const FockSpace& space, int mode);
Matrix total_number_operator(const FockSpace& space);
Matrix sector_projector(const FockSpace& space, int n);

/// Σ_{hk} coeff(h,k) a_h† a_k assembled column-by-column.
Matrix one_body_operator(const FockSpace& space, const Matrix& coeff);

}  // namespace fockdyn
