#include "qvr/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvr {

HarmonicCoefficients scattering_coefficients(const ModelParams& p, double omega,
                                             int order) {
    if (!(omega > 0.0))
        throw invalid_parameter("scattering_coefficients: omega must be positive");
    const auto sys = build_tridiagonal(p, omega, order);
    const TridiagonalFactor lu(sys);
    // Rows +1 and -1 of T^{-1} equal its columns by complex symmetry.
    const auto row_plus = lu.unit_solve(+1);
    const auto row_minus = lu.unit_solve(-1);

    HarmonicCoefficients out;
    out.omega = omega;
    out.omega_d = p.omega_d;
    out.order = order;
    out.k.resize(2 * order + 1);
    const cdouble pref = cdouble{0.0, -2.0 * p.gamma} / char_poly(p, omega);
    for (int j = -order; j <= order; ++j) {
        const double nu = omega + j * p.omega_d;
        if (nu == 0.0) {
            out.k[j + order] = 0.0;
            continue;
        }
        const double amp = std::sqrt(omega * std::abs(nu));
        const cdouble delta = (j == 0) ? 1.0 : 0.0;
        const cdouble resp =
            delta + p.epsilon * (row_plus[j + order] + row_minus[j + order]);
        out.k[j + order] = delta + pref * amp * resp;
    }
    return out;
}

HarmonicCoefficients analytic_first_harmonic(const ModelParams& p, double omega) {
    if (!(omega > 0.0 && omega < p.omega_d))
        throw out_of_regime(
            "analytic_first_harmonic: requires 0 < omega < omega_d; use the "
            "general solver elsewhere");
    const cdouble D0 = char_poly(p, omega);
    const cdouble D1 = char_poly(p, omega + p.omega_d);
    const cdouble Dm1 = char_poly(p, omega - p.omega_d);
    const double e = p.epsilon, wa = p.omega_a;
    const cdouble ktilde = (cdouble{0.0, 2.0 * p.gamma * omega} / D0) /
                           (1.0 - 4.0 * e * e * wa * wa * (D1 + Dm1) / (D0 * D1 * Dm1));
    HarmonicCoefficients out;
    out.omega = omega;
    out.omega_d = p.omega_d;
    out.order = 1;
    out.k = {2.0 * e * wa * ktilde / Dm1 * std::sqrt((p.omega_d - omega) / omega),
             1.0 - ktilde,
             2.0 * e * wa * ktilde / D1 * std::sqrt((omega + p.omega_d) / omega)};
    return out;
}

namespace {

// Relative change between successive truncations, padding the coarse set
// with zeros over the finer support.
double coefficient_change(const HarmonicCoefficients& lo,
                          const HarmonicCoefficients& hi, double abs_floor) {
    double kmax = 0.0;
    for (const auto& k : hi.k) kmax = std::max(kmax, std::abs(k));
    const double floor = abs_floor * std::max(1.0, kmax);
    double worst = 0.0;
    for (int j = -hi.order; j <= hi.order; ++j) {
        const cdouble a = (std::abs(j) <= lo.order) ? lo.coeff(j) : cdouble{0.0, 0.0};
        const cdouble b = hi.coeff(j);
        worst = std::max(worst, std::abs(b - a) / std::max(std::abs(b), floor));
    }
    return worst;
}

}  // namespace

HarmonicCoefficients converged_coefficients(const ModelParams& p, double omega,
                                            const SolverOptions& opt) {
    if (!(opt.rel_tol > 0.0))
        throw invalid_parameter("converged_coefficients: rel_tol must be positive");
    int order = 2;
    HarmonicCoefficients lo = scattering_coefficients(p, omega, order);
    while (2 * order <= opt.max_order) {
        HarmonicCoefficients hi = scattering_coefficients(p, omega, 2 * order);
        if (coefficient_change(lo, hi, opt.abs_floor) < opt.rel_tol) return lo;
        lo = std::move(hi);
        order *= 2;
    }
    std::ostringstream msg;
    msg << "converged_coefficients: no convergence up to N = " << opt.max_order
        << " at omega = " << omega << " (expected inside or near an instability region)";
    throw non_convergence(msg.str());
}

HarmonicCoefficients solve_coefficients(const ModelParams& p, double omega,
                                        const SolverOptions& opt) {
    if (opt.fixed_order) return scattering_coefficients(p, omega, *opt.fixed_order);
    return converged_coefficients(p, omega, opt);
}

double sum_rule_deviation(const HarmonicCoefficients& c) {
    double s = 0.0;
    for (int j = -c.order; j <= c.order; ++j) {
        const double nu = c.channel_frequency(j);
        const double w2 = std::norm(c.coeff(j));
        if (nu > 0.0)
            s += w2;
        else if (nu < 0.0)
            s -= w2;
    }
    return std::abs(s - 1.0);
}

}  // namespace qvr
