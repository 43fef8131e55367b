// Error taxonomy. Precondition violations throw std::invalid_argument;
// numeric conditions get dedicated types so callers can map them to
// exit codes and structured reports.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fockdyn {

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature (or another discretization) did not reach the required accuracy.
struct AccuracyFailure : NumericFailure {
    AccuracyFailure(const std::string& what, int suggested_order)
        : NumericFailure(what), suggested_order(suggested_order) {}
    int suggested_order = 0;
};

/// Requested resolvent energy too close to a spectrum point.
struct SpectralProximity : NumericFailure {
    SpectralProximity(const std::string& what, std::complex<double> offending)
        : NumericFailure(what), offending_eigenvalue(offending) {}
    std::complex<double> offending_eigenvalue;
};

/// Constraint targets outside (or on the boundary of) the achievable set.
struct Infeasible : NumericFailure {
    using NumericFailure::NumericFailure;
};

/// Singular constraint Jacobian.
struct DegenerateConstraints : NumericFailure {
    using NumericFailure::NumericFailure;
};

/// Iteration cap reached; carries the best residual seen.
struct NonConvergence : NumericFailure {
    NonConvergence(const std::string& what, double best_residual)
        : NumericFailure(what), best_residual(best_residual) {}
    double best_residual = 0.0;
};

/// Quadrature of the history integral needs refinement.
struct RefineNeeded : NumericFailure {
    RefineNeeded(const std::string& what, double estimate)
        : NumericFailure(what), error_estimate(estimate) {}
    double error_estimate = 0.0;
};

}  // namespace fockdyn
