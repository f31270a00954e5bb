#include "qvr/correlators.hpp"

#include <algorithm>
#include <cmath>

namespace qvr {

double resonant_drive(const ModelParams& p, int subharmonic) {
    if (subharmonic < 1)
        throw invalid_parameter("resonant_drive: subharmonic must be >= 1");
    return 2.0 * effective_frequency(p) / subharmonic;
}

double flux_density_from(const HarmonicCoefficients& c, double omega_th) {
    double s = 0.0;
    for (int j = -c.order; j <= c.order; ++j) {
        const double w2 = std::norm(c.coeff(j));
        if (w2 == 0.0) continue;
        const double nu = c.channel_frequency(j);
        if (nu > 0.0)
            s += w2 * thermal_occupation(nu, omega_th);
        else if (nu < 0.0)
            s += w2 * (1.0 + thermal_occupation(-nu, omega_th));
    }
    return s;
}

double flux_density(const ModelParams& p, double omega, const SolverOptions& opt) {
    if (!(omega > 0.0))
        throw invalid_parameter("flux_density: omega must be positive");
    if (p.epsilon == 0.0) {
        // Passive scattering: |k_0| = 1, the output keeps the input spectrum.
        return thermal_occupation(omega, p.omega_th) * std::norm(
                   1.0 - cdouble{0.0, 2.0 * p.gamma * omega} / char_poly(p, omega));
    }
    return flux_density_from(solve_coefficients(p, omega, opt), p.omega_th);
}

double linearized_flux_density(const ModelParams& p, double omega) {
    if (!(omega > 0.0 && omega < p.omega_d)) return 0.0;
    // Grouping omega*(omega_d - omega) first keeps the omega -> omega_d - omega
    // mirror symmetry exact in floating point.
    const double pair = omega * (p.omega_d - omega);
    const double pref = 16.0 * p.epsilon * p.epsilon * p.gamma * p.gamma *
                        p.omega_a * p.omega_a;
    const double d0 = std::norm(char_poly(p, omega));
    const double dm1 = std::norm(char_poly(p, omega - p.omega_d));
    return pref * pair / (d0 * dm1);
}

SpectrumSeries flux_density_spectrum(const ModelParams& p,
                                     const std::vector<double>& grid,
                                     const SolverOptions& opt, const Exec& ex) {
    SpectrumSeries s;
    s.grid = grid;
    s.observable = "flux_density";
    s.params = p;
    s.values = map_grid(
        grid, [&](double w) { return std::max(0.0, flux_density(p, w, opt)); }, ex);
    return s;
}

double photon_flux(const ModelParams& p, const FluxWindow& window,
                   const SolverOptions& opt, const QuadOptions& quad) {
    const double lo = window.lo.value_or(1e-3 * p.omega_a);
    double hi;
    if (window.hi) {
        hi = *window.hi;
    } else {
        int n_rep = opt.fixed_order.value_or(0);
        if (n_rep <= 0) n_rep = converged_coefficients(p, 0.5 * p.omega_d, opt).order;
        hi = (n_rep + 1) * p.omega_d;
    }
    if (!(lo > 0.0 && hi > lo))
        throw invalid_parameter("photon_flux: window must satisfy 0 < lo < hi");

    std::vector<double> pts{lo, hi};
    const double wt = effective_frequency(p);
    const int m_max = static_cast<int>(std::ceil(hi / p.omega_d)) + 1;
    for (int m = 0; m <= m_max; ++m) {
        for (const double r : {m * p.omega_d - wt, m * p.omega_d + wt, m * p.omega_d}) {
            const double c = std::abs(r);
            if (c > lo && c < hi) {
                pts.push_back(c);
                // Peaks have width ~gamma; give the splitter a head start.
                for (const double off : {5.0 * p.gamma, 40.0 * p.gamma}) {
                    if (c - off > lo) pts.push_back(c - off);
                    if (c + off < hi) pts.push_back(c + off);
                }
            }
        }
    }
    return adaptive_integrate([&](double w) { return flux_density(p, w, opt); },
                              std::move(pts), quad);
}

cdouble anomalous_correlator(const ModelParams& p, double omega1, double omega2,
                             const SolverOptions& opt) {
    if (!(omega1 > 0.0 && omega2 > 0.0))
        throw invalid_parameter("anomalous_correlator: frequencies must be positive");
    const double sum = omega1 + omega2;
    const int m = static_cast<int>(std::lround(sum / p.omega_d));
    if (m < 1 || std::abs(sum - m * p.omega_d) > 1e-9 * p.omega_a) return {0.0, 0.0};
    if (p.epsilon == 0.0) return {0.0, 0.0};

    const auto c1 = solve_coefficients(p, omega1, opt);
    const auto c2 = solve_coefficients(p, omega2, opt);
    cdouble s{0.0, 0.0};
    for (int j1 = -c1.order; j1 <= c1.order; ++j1) {
        const int j2 = -m - j1;
        if (j2 < -c2.order || j2 > c2.order) continue;
        const double nu = c1.channel_frequency(j1);
        if (nu == 0.0) continue;
        // Normal ordering of the input state: annihilation-first pairings
        // carry 1 + nbar, creation-first pairings nbar.
        const double w = (nu > 0.0) ? 1.0 + thermal_occupation(nu, p.omega_th)
                                    : thermal_occupation(-nu, p.omega_th);
        if (w == 0.0) continue;
        s += c1.coeff(j1) * c2.coeff(j2) * w;
    }
    return s;
}

PairCorrelation pair_correlation(const ModelParams& p, double omega1, double omega2,
                                 const SolverOptions& opt) {
    PairCorrelation pc;
    pc.omega1 = omega1;
    pc.omega2 = omega2;
    const int m = static_cast<int>(std::lround((omega1 + omega2) / p.omega_d));
    pc.m = (m >= 1 && std::abs(omega1 + omega2 - m * p.omega_d) <= 1e-9 * p.omega_a)
               ? m
               : 0;
    pc.value = anomalous_correlator(p, omega1, omega2, opt);
    return pc;
}

double voltage_noise_integrand(const ModelParams& p, double omega,
                               const SolverOptions& opt) {
    if (!(omega > 0.0 && omega < 0.5 * p.omega_d))
        throw invalid_parameter(
            "voltage_noise_integrand: requires 0 < omega < omega_d/2");
    return 2.0 * std::real(anomalous_correlator(p, 0.5 * p.omega_d - omega,
                                                0.5 * p.omega_d + omega, opt));
}

}  // namespace qvr
