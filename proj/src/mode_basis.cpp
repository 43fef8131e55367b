#include "fockdyn/mode_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockdyn {

double ModeBasis::mode_value(int f, double x) const {
    const double k = (f + 1) * std::numbers::pi / box_length;
    return std::sqrt(2.0 / box_length) * std::sin(k * x);
}

double ModeBasis::mode_derivative(int f, double x) const {
    const double k = (f + 1) * std::numbers::pi / box_length;
    return std::sqrt(2.0 / box_length) * k * std::cos(k * x);
}

ModeBasis make_mode_basis(int mode_count, double box_length, double mass, double hbar,
                          Statistics statistics) {
    if (mode_count < 1) throw std::invalid_argument("mode_basis: mode_count must be >= 1");
    if (box_length <= 0.0) throw std::invalid_argument("mode_basis: box_length must be > 0");
    if (mass <= 0.0) throw std::invalid_argument("mode_basis: mass must be > 0");
    if (hbar <= 0.0) throw std::invalid_argument("mode_basis: hbar must be > 0");

    ModeBasis b;
    b.mode_count = mode_count;
    b.box_length = box_length;
    b.mass = mass;
    b.hbar = hbar;
    b.statistics = statistics;
    b.energies.resize(mode_count);
    for (int f = 0; f < mode_count; ++f) {
        const double kf = hbar * std::numbers::pi * (f + 1) / box_length;
        b.energies[f] = kf * kf / (2.0 * mass);
    }
    return b;
}

}  // namespace fockdyn
