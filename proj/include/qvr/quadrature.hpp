#ifndef QVR_QUADRATURE_HPP
#define QVR_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "qvr/errors.hpp"

namespace qvr {

struct QuadOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_panels = 20000;
};

/// Globally adaptive composite Gauss-Legendre integration. Starts from the
/// panels between consecutive breakpoints and keeps splitting the panel with
/// the largest error estimate (|whole - sum of halves|) until the total
/// estimate is below max(rel_tol*|I|, abs_tol). Breakpoints let the caller
/// seed known resonance locations. Throws integration_error when max_panels
/// is exhausted with the error still above tolerance.
double adaptive_integrate(const std::function<double(double)>& f,
                          std::vector<double> breakpoints,
                          const QuadOptions& opt = {});

/// 15-point Gauss-Legendre rule on [a, b].
double gauss15(const std::function<double(double)>& f, double a, double b);

}  // namespace qvr

#endif
