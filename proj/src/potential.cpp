#include "fockdyn/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockdyn {

double Potential::operator()(double r) const {
    const double a = std::abs(r);
    switch (kind) {
        case Kind::gaussian:
            return strength * std::exp(-a * a / (2.0 * range * range));
        case Kind::contact:
            return strength * std::exp(-a * a / (2.0 * range * range)) /
                   (range * std::sqrt(2.0 * std::numbers::pi));
        case Kind::screened:
            return strength * std::exp(-a / range);
    }
    return 0.0;
}

Potential make_potential(Potential::Kind kind, double strength, double range) {
    if (range <= 0.0) throw std::invalid_argument("potential: range must be > 0");
    Potential v;
    v.kind = kind;
    v.strength = strength;
    v.range = range;
    return v;
}

Potential::Kind potential_kind_from_string(const std::string& name) {
    if (name == "gaussian") return Potential::Kind::gaussian;
    if (name == "contact") return Potential::Kind::contact;
    if (name == "screened") return Potential::Kind::screened;
    throw std::invalid_argument("potential: unknown kind '" + name + "'");
}

std::string to_string(Potential::Kind kind) {
    switch (kind) {
        case Potential::Kind::gaussian: return "gaussian";
        case Potential::Kind::contact: return "contact";
        case Potential::Kind::screened: return "screened";
    }
    return "?";
}

}  // namespace fockdyn
