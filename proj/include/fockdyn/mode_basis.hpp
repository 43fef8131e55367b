#pragma once

#include <vector>

#include "fockdyn/types.hpp"

namespace fockdyn {

/// Single-particle normal modes of a 1D box with walls at x = 0 and x = L.
/// Mode index f runs 1..M externally, stored 0-based.
struct ModeBasis {
    int mode_count = 0;
    double box_length = 0.0;
    double mass = 0.0;
    double hbar = 0.0;
    Statistics statistics = Statistics::bose;
    std::vector<double> energies;  // E_f = (hbar*pi*f)^2 / (2 m L^2), strictly increasing

    /// u_f(x) = sqrt(2/L) sin((f+1) pi x / L); vanishes at the walls.
    double mode_value(int f, double x) const;
    double mode_derivative(int f, double x) const;
};

ModeBasis make_mode_basis(int mode_count, double box_length, double mass, double hbar,
                          Statistics statistics);

}  // namespace fockdyn
