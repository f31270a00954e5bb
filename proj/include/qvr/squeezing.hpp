#ifndef QVR_SQUEEZING_HPP
#define QVR_SQUEEZING_HPP

#include <Eigen/Dense>

#include "qvr/correlators.hpp"

namespace qvr {

/// 4x4 real symmetric covariance matrix over (q-, p-, q+, p+) with
/// q = (b + b^dag)/sqrt(2), p = i(b - b^dag)/sqrt(2), for the output mode
/// pair b+ = c_out(omega), b- = c_out(2*Omega - omega).
using CovMatrix4 = Eigen::Matrix4d;

struct NegativityResult {
    double log_negativity;  ///< natural-log convention
    double nu_minus;        ///< smallest partial-transpose symplectic eigenvalue
};

struct SqueezeResult {
    SpectrumSeries spectrum;  ///< S over the delta-omega grid at theta
    double theta;             ///< angle the spectrum was evaluated at
    double theta_opt;         ///< optimal angle at delta_omega = 0
    double s_min;             ///< minimum spectral value
    double percent;           ///< 100 * (1 - s_min)
};

/// Symmetrized occupation <b b^dag + b^dag b> of the output mode at omega.
double mode_occupation_sym(const ModelParams& p, double omega,
                           const SolverOptions& opt = {});

/// Symmetrized anomalous amplitude <b- b+ + b+ b->.
cdouble pair_amplitude_sym(const ModelParams& p, double omega, double Omega,
                           const SolverOptions& opt = {});

CovMatrix4 covariance_matrix(const ModelParams& p, double omega, double Omega,
                             const SolverOptions& opt = {});

/// Quadrature angle minimizing the squeezing spectrum, in (-pi/2, pi/2].
/// The arctan of the pair amplitude fixes the axis up to pi/2; the branch is
/// picked by evaluating the spectrum at both candidates. Throws
/// undefined_angle when the pair amplitude vanishes (unsqueezed state).
double optimal_angle(const ModelParams& p, double omega, double Omega,
                     const SolverOptions& opt = {});

/// Noise-power spectrum of the theta-quadrature in the frame rotating at
/// Omega: 1 for unsqueezed vacuum, 0 for maximal squeezing.
///   S = 1 + n_out(Omega-dw) + n_out(Omega+dw)
///         + 2 Re[e^{2 i theta} <c_out(Omega-dw) c_out(Omega+dw)>].
double squeezing_spectrum(const ModelParams& p, double delta_omega, double theta,
                          double Omega, const SolverOptions& opt = {});

/// Spectrum over a delta-omega grid at theta (or at theta_opt when theta is
/// NaN), with the optimum angle and minimum recorded.
SqueezeResult squeeze_scan(const ModelParams& p, const std::vector<double>& dw_grid,
                           double theta, double Omega, const SolverOptions& opt = {},
                           const Exec& ex = {});

/// Gaussian Wigner density W(r) = exp(-r^T V^{-1} r / 2) / ((2 pi)^2 sqrt(det V)).
double wigner_value(const CovMatrix4& cov, const Eigen::Vector4d& r);

/// Logarithmic negativity max[0, -ln(2 nu-)] from the partial-transpose
/// symplectic eigenvalue; 0 for every separable state.
NegativityResult log_negativity(const CovMatrix4& cov);

/// Smallest symplectic eigenvalue of cov itself (physicality: >= 1/2).
double symplectic_nu_minus(const CovMatrix4& cov);

/// Normally ordered witness <:f_theta^dag f_theta:>; negative values certify
/// a nonclassical output field.
double nonclassicality_witness(const ModelParams& p, double omega, double Omega,
                               double theta, const SolverOptions& opt = {});

/// Reduced 2x2 covariance of the rotated coordinates
/// (lambda1, lambda2) = (q- + q+, p- + p+) used for Wigner projections.
Eigen::Matrix2d reduced_rotated_covariance(const CovMatrix4& cov);

/// Ratio (>= 1) of the principal standard deviations of a 2x2 covariance.
double principal_std_ratio(const Eigen::Matrix2d& cov2);

}  // namespace qvr

#endif
