#include "fockdyn/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fockdyn/linalg.hpp"

namespace fockdyn {

Matrix packet_coefficient(const ModeBasis& basis, double x0, double p0, double sigma,
                          int quad_order) {
    if (sigma <= 0.0) throw std::invalid_argument("packet_coefficient: sigma must be > 0");
    const int m = basis.mode_count;
    // Enough nodes to resolve both the packet phase and the mode oscillation.
    const int cycles = static_cast<int>(std::ceil(
        basis.box_length * (std::abs(p0) / basis.hbar + m * std::numbers::pi / basis.box_length) /
        (2.0 * std::numbers::pi)));
    const int order = std::max(quad_order, 8 * cycles + 32);
    const auto q = gauss_legendre(order, 0.0, basis.box_length);

    const double norm = std::pow(std::numbers::pi * sigma * sigma, -0.25);
    Vector c(m);
    c.setZero();
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double x = q.nodes[i];
        const double envelope = norm * std::exp(-(x - x0) * (x - x0) / (2.0 * sigma * sigma));
        const Complex packet = envelope * std::exp(Complex(0.0, p0 * x / basis.hbar));
        for (int h = 0; h < m; ++h) c[h] += q.weights[i] * basis.mode_value(h, x) * packet;
    }
    return (c * c.adjoint()) / (2.0 * std::numbers::pi * basis.hbar);
}

namespace {

PhaseSpaceGrid build_grid(const FockSpace& space, const PhaseSpaceGridSpec& spec, int quad_order,
                          const RealVector* cell_velocity) {
    const auto& basis = space.basis;
    if (spec.nx < 1 || spec.np < 1)
        throw std::invalid_argument("phase_space_grid: grid must have at least one node per axis");

    PhaseSpaceGrid grid;
    grid.nx = spec.nx;
    grid.np = spec.np;
    grid.sigma = spec.sigma > 0.0 ? spec.sigma : basis.box_length / (2.0 * basis.mode_count);
    double p_max = spec.p_max;
    if (p_max <= 0.0) {
        // Cover the highest mode momentum plus the packet spread.
        p_max = basis.hbar * std::numbers::pi * (basis.mode_count + 1) / basis.box_length +
                3.0 * basis.hbar / grid.sigma;
    }
    grid.dx = basis.box_length / spec.nx;
    grid.dp = 2.0 * p_max / spec.np;
    for (int i = 0; i < spec.nx; ++i) grid.x.push_back((i + 0.5) * grid.dx);
    for (int j = 0; j < spec.np; ++j) grid.p.push_back(-p_max + (j + 0.5) * grid.dp);

    grid.coeff.reserve(spec.nx * spec.np);
    grid.f_op.reserve(spec.nx * spec.np);
    for (int i = 0; i < spec.nx; ++i) {
        double shift = 0.0;
        if (cell_velocity && cell_velocity->size() > 0) {
            const int cells = static_cast<int>(cell_velocity->size());
            int c = static_cast<int>(grid.x[i] / basis.box_length * cells);
            c = std::min(c, cells - 1);
            shift = basis.mass * (*cell_velocity)[c];
        }
        for (int j = 0; j < spec.np; ++j) {
            Matrix f = packet_coefficient(basis, grid.x[i], grid.p[j] - shift, grid.sigma,
                                          quad_order);
            grid.coeff.push_back(f);
            grid.f_op.push_back(hermitian_operator(one_body_operator(space, f)));
        }
    }
    return grid;
}

}  // namespace

PhaseSpaceGrid build_phase_space_grid(const FockSpace& space, const PhaseSpaceGridSpec& spec,
                                      int quad_order) {
    return build_grid(space, spec, quad_order, nullptr);
}

PhaseSpaceGrid build_phase_space_grid_rest(const FockSpace& space, const PhaseSpaceGridSpec& spec,
                                           int quad_order, const RealVector& cell_velocity) {
    return build_grid(space, spec, quad_order, &cell_velocity);
}

}  // namespace fockdyn
