#pragma once

#include <vector>

#include "fockdyn/fock_space.hpp"
#include "fockdyn/types.hpp"

namespace fockdyn {

struct PhaseSpaceGridSpec {
    int nx = 6;
    int np = 6;
    double p_max = 0.0;   // 0 selects a default from the mode spectrum
    double sigma = 0.0;   // 0 selects L / (2M)
};

/// Positive operator-valued phase-space density on a rectangular grid.
/// Each node carries f̂_{ij} = Σ_{hk} a_h† ⟨u_h|F(x_i,p_j)|u_k⟩ a_k with
/// F(x,p) = |g_{x,p}⟩⟨g_{x,p}| / (2πħ) and g a Gaussian packet of width
/// sigma; the coefficient matrix is rank one, so every f̂_{ij} ⪰ 0.
struct PhaseSpaceGrid {
    std::vector<double> x, p;  // node centers (midpoint layout)
    double dx = 0.0, dp = 0.0, sigma = 0.0;
    int nx = 0, np = 0;
    std::vector<Matrix> coeff;   // one-body coefficients, row-major i*np + j
    std::vector<Operator> f_op;  // materialized Fock operators

    const Matrix& coefficient(int i, int j) const { return coeff[i * np + j]; }
    const Operator& density(int i, int j) const { return f_op[i * np + j]; }
};

/// Packet coefficient matrix ⟨u_h|F(x0,p0)|u_k⟩ (modes × modes, PSD rank 1).
Matrix packet_coefficient(const ModeBasis& basis, double x0, double p0, double sigma,
                          int quad_order);

PhaseSpaceGrid build_phase_space_grid(const FockSpace& space, const PhaseSpaceGridSpec& spec,
                                      int quad_order);

/// Rest-frame grid: packets evaluated at p − m·v(x), with v piecewise
/// constant over the supplied cell partition of [0, L].
PhaseSpaceGrid build_phase_space_grid_rest(const FockSpace& space, const PhaseSpaceGridSpec& spec,
                                           int quad_order, const RealVector& cell_velocity);

}  // namespace fockdyn
