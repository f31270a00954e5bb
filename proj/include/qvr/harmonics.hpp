#ifndef QVR_HARMONICS_HPP
#define QVR_HARMONICS_HPP

#include <optional>
#include <vector>

#include "qvr/model.hpp"
#include "qvr/tridiagonal.hpp"

namespace qvr {

/// Output-field scattering amplitudes k_j(omega), j = -N..N. k_j multiplies
/// the input channel at omega + j*omega_d; channels at negative frequency
/// address creation operators and carry the vacuum emission.
struct HarmonicCoefficients {
    double omega = 0.0;
    double omega_d = 0.0;
    int order = 0;
    std::vector<cdouble> k;  ///< size 2N+1, index j + N

    cdouble coeff(int j) const { return k[j + order]; }
    double channel_frequency(int j) const { return omega + j * omega_d; }
};

struct SolverOptions {
    std::optional<int> fixed_order;  ///< bypass convergence, solve at this N
    double rel_tol = 1e-8;           ///< coefficient convergence tolerance
    int max_order = 512;             ///< ceiling for the doubling search
    double abs_floor = 1e-12;        ///< below this, compare absolutely
};

/// Coefficients at fixed truncation order via the tridiagonal solve:
/// k_j = delta_j0 - (2 i gamma / D(omega)) sqrt(omega |omega + j omega_d|)
///       [delta_j0 + epsilon (Tinv_{1,j} + Tinv_{-1,j})].
/// Channels with omega + j*omega_d exactly zero get amplitude 0.
HarmonicCoefficients scattering_coefficients(const ModelParams& p, double omega,
                                             int order);

/// Closed-form N = 1 coefficients, valid for 0 < omega < omega_d; the
/// general solver is the route outside that regime.
HarmonicCoefficients analytic_first_harmonic(const ModelParams& p, double omega);

/// Doubles N from 2 upward until no |k_j| moves by more than rel_tol
/// relatively (tiny ones compared absolutely); returns the certified order.
/// Throws non_convergence past max_order, as expected near instability.
HarmonicCoefficients converged_coefficients(const ModelParams& p, double omega,
                                            const SolverOptions& opt = {});

/// Dispatch: fixed_order if set, otherwise the doubling search.
HarmonicCoefficients solve_coefficients(const ModelParams& p, double omega,
                                        const SolverOptions& opt = {});

/// |sum_annihilation |k_j|^2 - sum_creation |k_j|^2 - 1|.
double sum_rule_deviation(const HarmonicCoefficients& c);

}  // namespace qvr

#endif
