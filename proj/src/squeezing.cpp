#include "qvr/squeezing.hpp"

#include <cmath>
#include <limits>

namespace qvr {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fold_angle(double theta) {
    while (theta > 0.5 * kPi) theta -= kPi;
    while (theta <= -0.5 * kPi) theta += kPi;
    return theta;
}

}  // namespace

double mode_occupation_sym(const ModelParams& p, double omega,
                           const SolverOptions& opt) {
    if (!(omega > 0.0))
        throw invalid_parameter("mode_occupation_sym: omega must be positive");
    if (p.epsilon == 0.0)
        return 1.0 + 2.0 * thermal_occupation(omega, p.omega_th);
    const auto c = solve_coefficients(p, omega, opt);
    double s = 0.0;
    for (int j = -c.order; j <= c.order; ++j) {
        const double w2 = std::norm(c.coeff(j));
        if (w2 == 0.0) continue;
        const double nu = std::abs(c.channel_frequency(j));
        if (nu == 0.0) continue;
        s += w2 * (1.0 + 2.0 * thermal_occupation(nu, p.omega_th));
    }
    return s;
}

cdouble pair_amplitude_sym(const ModelParams& p, double omega, double Omega,
                           const SolverOptions& opt) {
    const double partner = 2.0 * Omega - omega;
    return anomalous_correlator(p, partner, omega, opt) +
           anomalous_correlator(p, omega, partner, opt);
}

CovMatrix4 covariance_matrix(const ModelParams& p, double omega, double Omega,
                             const SolverOptions& opt) {
    const double partner = 2.0 * Omega - omega;
    if (!(omega > 0.0 && partner > 0.0))
        throw invalid_parameter(
            "covariance_matrix: both omega and 2*Omega - omega must be positive");
    const double m_minus = mode_occupation_sym(p, partner, opt);
    const double m_plus = mode_occupation_sym(p, omega, opt);
    const cdouble c = pair_amplitude_sym(p, omega, Omega, opt);
    const double rc = std::real(c), ic = std::imag(c);

    CovMatrix4 v;
    v << m_minus, 0.0, rc, -ic,
         0.0, m_minus, -ic, -rc,
         rc, -ic, m_plus, 0.0,
         -ic, -rc, 0.0, m_plus;
    return 0.5 * v;
}

double squeezing_spectrum(const ModelParams& p, double delta_omega, double theta,
                          double Omega, const SolverOptions& opt) {
    const double wm = Omega - delta_omega, wp = Omega + delta_omega;
    if (!(wm > 0.0 && wp > 0.0))
        throw invalid_parameter(
            "squeezing_spectrum: Omega +- delta_omega must stay positive");
    const double n = flux_density(p, wm, opt) + flux_density(p, wp, opt);
    const cdouble a = anomalous_correlator(p, wm, wp, opt);
    return 1.0 + n + 2.0 * std::real(std::exp(cdouble{0.0, 2.0 * theta}) * a);
}

double optimal_angle(const ModelParams& p, double omega, double Omega,
                     const SolverOptions& opt) {
    const cdouble c = pair_amplitude_sym(p, omega, Omega, opt);
    if (std::abs(c) < 1e-14)
        throw undefined_angle("optimal_angle: pair amplitude vanishes (unsqueezed)");
    const double base = 0.5 * std::atan2(-std::imag(c), std::real(c));
    const double dw = omega - Omega;
    const double s0 = squeezing_spectrum(p, dw, base, Omega, opt);
    const double s1 = squeezing_spectrum(p, dw, base + 0.5 * kPi, Omega, opt);
    return fold_angle(s0 <= s1 ? base : base + 0.5 * kPi);
}

SqueezeResult squeeze_scan(const ModelParams& p, const std::vector<double>& dw_grid,
                           double theta, double Omega, const SolverOptions& opt,
                           const Exec& ex) {
    SqueezeResult r;
    try {
        r.theta_opt = optimal_angle(p, Omega, Omega, opt);
    } catch (const undefined_angle&) {
        r.theta_opt = 0.0;  // unsqueezed state, any angle will do
    }
    r.theta = std::isnan(theta) ? r.theta_opt : theta;
    r.spectrum.grid = dw_grid;
    r.spectrum.observable = "squeezing_spectrum";
    r.spectrum.params = p;
    r.spectrum.values = map_grid(
        dw_grid,
        [&](double dw) { return squeezing_spectrum(p, dw, r.theta, Omega, opt); }, ex);
    r.s_min = squeezing_spectrum(p, 0.0, r.theta, Omega, opt);
    for (const double v : r.spectrum.values) r.s_min = std::min(r.s_min, v);
    r.percent = 100.0 * (1.0 - r.s_min);
    return r;
}

double wigner_value(const CovMatrix4& cov, const Eigen::Vector4d& r) {
    const Eigen::LLT<CovMatrix4> llt(cov);
    if (llt.info() != Eigen::Success)
        throw invalid_state("wigner_value: covariance is not positive definite");
    const double det = cov.determinant();
    if (!(det > 0.0))
        throw invalid_state("wigner_value: covariance determinant not positive");
    const double quad = r.dot(llt.solve(r));
    return std::exp(-0.5 * quad) / (4.0 * kPi * kPi * std::sqrt(det));
}

namespace {

// Smallest symplectic eigenvalue from the two-mode invariants
// Delta = det A + det B + 2 s det C; s = -1 flips to the partial transpose.
double nu_minus_from(const CovMatrix4& v, double c_sign) {
    const Eigen::Matrix2d a = v.block<2, 2>(0, 0);
    const Eigen::Matrix2d b = v.block<2, 2>(2, 2);
    const Eigen::Matrix2d c = v.block<2, 2>(0, 2);
    const double delta =
        a.determinant() + b.determinant() + 2.0 * c_sign * c.determinant();
    const double det_v = v.determinant();
    double disc = delta * delta - 4.0 * det_v;
    if (disc < 0.0) {
        if (disc < -1e-12 * std::max(1.0, delta * delta))
            throw invalid_state("symplectic eigenvalue: negative discriminant");
        disc = 0.0;
    }
    double nu2 = 0.5 * (delta - std::sqrt(disc));
    if (nu2 < 0.0) {
        if (nu2 < -1e-12)
            throw invalid_state("symplectic eigenvalue: negative nu^2");
        nu2 = 0.0;
    }
    return std::sqrt(nu2);
}

}  // namespace

double symplectic_nu_minus(const CovMatrix4& cov) { return nu_minus_from(cov, 1.0); }

NegativityResult log_negativity(const CovMatrix4& cov) {
    const double nu = nu_minus_from(cov, -1.0);
    if (!(nu > 0.0))
        throw invalid_state("log_negativity: vanishing symplectic eigenvalue");
    return {std::max(0.0, -std::log(2.0 * nu)), nu};
}

double nonclassicality_witness(const ModelParams& p, double omega, double Omega,
                               double theta, const SolverOptions& opt) {
    const double partner = 2.0 * Omega - omega;
    if (!(omega > 0.0 && partner > 0.0))
        throw invalid_parameter(
            "nonclassicality_witness: both mode frequencies must be positive");
    const double n = flux_density(p, omega, opt) + flux_density(p, partner, opt);
    const cdouble c = pair_amplitude_sym(p, omega, Omega, opt);
    return 2.0 * n - 2.0 * std::real(std::exp(cdouble{0.0, 2.0 * theta}) * c);
}

Eigen::Matrix2d reduced_rotated_covariance(const CovMatrix4& v) {
    Eigen::Matrix2d r;
    r(0, 0) = v(0, 0) + v(2, 2) + 2.0 * v(0, 2);
    r(1, 1) = v(1, 1) + v(3, 3) + 2.0 * v(1, 3);
    r(0, 1) = r(1, 0) = v(0, 1) + v(0, 3) + v(2, 1) + v(2, 3);
    return r;
}

double principal_std_ratio(const Eigen::Matrix2d& cov2) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov2);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
    if (!(lo > 0.0))
        throw invalid_state("principal_std_ratio: covariance not positive definite");
    return std::sqrt(hi / lo);
}

}  // namespace qvr
