#pragma once

#include <string>

#include "fockdyn/types.hpp"

namespace fockdyn {

/// Real, even two-body potential V(|r|).
///   gaussian:  V(r) = strength * exp(-r^2 / (2 range^2))
///   contact:   strength * normalized gaussian of width `range`
///              (approaches strength * delta(r) as range -> 0)
///   screened:  V(r) = strength * exp(-|r| / range)
struct Potential {
    enum class Kind { gaussian, contact, screened };
    Kind kind = Kind::gaussian;
    double strength = 0.0;  // energy scale
    double range = 1.0;     // length scale, > 0

    double operator()(double r) const;
};

Potential make_potential(Potential::Kind kind, double strength, double range);
Potential::Kind potential_kind_from_string(const std::string& name);
std::string to_string(Potential::Kind kind);

}  // namespace fockdyn
