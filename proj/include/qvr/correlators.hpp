#ifndef QVR_CORRELATORS_HPP
#define QVR_CORRELATORS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qvr/harmonics.hpp"
#include "qvr/parallel.hpp"
#include "qvr/quadrature.hpp"

namespace qvr {

/// Frequency grid paired with real observable samples.
struct SpectrumSeries {
    std::vector<double> grid;
    std::vector<double> values;
    std::string observable;
    ModelParams params;
};

/// Two-photon amplitude <c_out(omega1) c_out(omega2)> with the matched
/// harmonic index m (omega1 + omega2 = m * omega_d).
struct PairCorrelation {
    double omega1 = 0.0;
    double omega2 = 0.0;
    int m = 0;
    cdouble value{0.0, 0.0};
};

/// Drive frequency satisfying subharmonic * omega_d = 2 * omega_tilde.
double resonant_drive(const ModelParams& p, int subharmonic = 1);

/// Photon flux density n_out(omega): each channel weighs with the thermal
/// occupation of its input frequency, creation channels carry the extra
/// vacuum quantum. Matches the first-harmonic thermal expansion at N = 1 and
/// generalizes it to any order.
double flux_density(const ModelParams& p, double omega, const SolverOptions& opt = {});

/// Same from precomputed coefficients.
double flux_density_from(const HarmonicCoefficients& c, double omega_th);

/// Small-modulation closed form
/// 16 eps^2 gamma^2 omega_a^2 omega (omega_d - omega) / (|D(omega)|^2 |D(omega - omega_d)|^2),
/// zero outside 0 < omega < omega_d. Exactly symmetric under
/// omega -> omega_d - omega.
double linearized_flux_density(const ModelParams& p, double omega);

SpectrumSeries flux_density_spectrum(const ModelParams& p,
                                     const std::vector<double>& grid,
                                     const SolverOptions& opt = {},
                                     const Exec& ex = {});

struct FluxWindow {
    std::optional<double> lo;  ///< default 1e-3 * omega_a
    std::optional<double> hi;  ///< default (N+1) * omega_d
};

/// Total photon flux: integral of flux_density over the window, with panel
/// seeds at every |m*omega_d +- omega_tilde| resonance. Units of omega_a.
double photon_flux(const ModelParams& p, const FluxWindow& window = {},
                   const SolverOptions& opt = {}, const QuadOptions& quad = {});

/// <c_out(omega1) c_out(omega2)>: sums the channel pairings
/// omega1 + j1*omega_d = -(omega2 + j2*omega_d). Zero unless omega1 + omega2
/// is an integer multiple m >= 1 of omega_d within 1e-9 * omega_a.
cdouble anomalous_correlator(const ModelParams& p, double omega1, double omega2,
                             const SolverOptions& opt = {});

PairCorrelation pair_correlation(const ModelParams& p, double omega1, double omega2,
                                 const SolverOptions& opt = {});

/// 2 Re <c_out(omega_d/2 - omega) c_out(omega_d/2 + omega)>, the integrand of
/// the voltage-noise Fourier transform. Requires 0 < omega < omega_d/2.
double voltage_noise_integrand(const ModelParams& p, double omega,
                               const SolverOptions& opt = {});

}  // namespace qvr

#endif
