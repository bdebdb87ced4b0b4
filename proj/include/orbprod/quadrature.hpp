#pragma once

// Thin wrappers over Boost.Math quadrature with a uniform failure mode.

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "error.hpp"

namespace orbprod {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive 61-point Gauss-Kronrod on [a, b]. Throws NumericalFailure when the
/// error estimate exceeds `accept` (relative to the L1 norm of the integrand).
template <class F>
QuadratureResult integrate_smooth(F&& f, double a, double b, double tol = 1e-12, double accept = 1e-11) {
    if (a == b) return {};
    double err = 0.0, l1 = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err, &l1);
    if (!std::isfinite(value) || err > accept * std::max(1.0, l1)) {
        throw Error(ErrorKind::NumericalFailure,
                    "Gauss-Kronrod did not converge (error estimate " + std::to_string(err) + ")");
    }
    return {value, err};
}

/// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
/// `f(x, xc)` receives the signed gap xc = a - x (near a, xc <= 0) or
/// b - x (near b, xc >= 0) so integrands can avoid cancellation there.
template <class F>
QuadratureResult integrate_endpoint_singular(F&& f, double a, double b, double tol = 1e-12,
                                             double accept = 1e-10) {
    if (a == b) return {};
    boost::math::quadrature::tanh_sinh<double> integrator(20);
    double err = 0.0, l1 = 0.0;
    const double value = integrator.integrate(f, a, b, tol, &err, &l1);
    if (!std::isfinite(value) || err > accept * std::max(1.0, l1)) {
        throw Error(ErrorKind::NumericalFailure,
                    "tanh-sinh did not converge (error estimate " + std::to_string(err) + ")");
    }
    return {value, err};
}

} // namespace orbprod
