#ifndef QVR_ERRORS_HPP
#define QVR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qvr {

// Parameter violates a model invariant (bad sign, crosses the critical point, ...).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// eta0 above the critical coupling: no real effective frequency.
struct supercritical_parameter : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

// Tridiagonal pivot below tolerance, or an undamped pole on the real axis.
struct singular_system : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Harmonic truncation exceeded its ceiling without settling.
struct non_convergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of panels before reaching tolerance.
struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Covariance matrix is not a physical Gaussian state.
struct invalid_state : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Anomalous amplitude vanishes; no squeezing axis exists.
struct undefined_angle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form first-harmonic expressions requested outside 0 < omega < omega_d.
struct out_of_regime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad key, value or token in a run configuration. Carries the field path.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

}  // namespace qvr

#endif
