#ifndef QVR_MODEL_HPP
#define QVR_MODEL_HPP

#include <complex>
#include <string>
#include <vector>

#include "qvr/errors.hpp"

namespace qvr {

using cdouble = std::complex<double>;

/// Physical configuration of the periodically modulated dissipative mode.
/// The coupling is eta(t) = eta0 + epsilon*cos(omega_d t); all fields share
/// the units of omega_a (internally everything runs with omega_a = 1).
struct ModelParams {
    double omega_a = 1.0;    ///< bare mode angular frequency
    double eta0 = 0.0;       ///< static coupling strength
    double epsilon = 0.0;    ///< modulation amplitude of the coupling
    double omega_d = 1.0;    ///< drive angular frequency
    double gamma = 0.0;      ///< decay rate (ohmic bath, frequency independent)
    double omega_th = 0.0;   ///< thermal frequency k_B T / hbar; 0 means T = 0
    int n_harmonics = 1;     ///< truncation order N
};

struct DerivedQuantities {
    double eta_c;          ///< critical coupling omega_a / 4
    double omega_tilde;    ///< effective closed-system frequency
    double coupling_ratio; ///< eta0 / eta_c
};

/// Critical coupling eta_c = omega_a / 4 of the quantum phase transition.
double critical_coupling(double omega_a);

/// sqrt(omega_a^2 - 4 eta0 omega_a); throws supercritical_parameter past eta_c.
double effective_frequency(const ModelParams& p);

/// omega_a^2 - 4 eta0 omega_a. May be negative; used where the supercritical
/// side is legitimate (mean-field stability classification).
double omega_tilde_sq(const ModelParams& p);

DerivedQuantities derive(const ModelParams& p);

/// Characteristic polynomial D(omega) = omega^2 + i gamma omega - omega_tilde^2.
cdouble char_poly(const ModelParams& p, double omega);

/// Bose occupation [exp(omega/omega_th) - 1]^-1; 0 at omega_th = 0 and for
/// omega/omega_th > 700 (value below 1e-300). Negative-frequency channels are
/// the caller's bookkeeping: omega <= 0 throws.
double thermal_occupation(double omega, double omega_th);

/// All violated ModelParams invariants, one message per violation.
/// Empty result means the parameters are valid.
std::vector<std::string> validate_report(const ModelParams& p);

/// Returns p unchanged if valid, otherwise throws invalid_parameter with the
/// full violation report joined into one message.
ModelParams validated(const ModelParams& p);

}  // namespace qvr

#endif
