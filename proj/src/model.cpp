#include "qvr/model.hpp"

#include <cmath>
#include <sstream>

namespace qvr {

double critical_coupling(double omega_a) {
    if (!(omega_a > 0.0))
        throw invalid_parameter("critical_coupling: omega_a must be positive");
    return omega_a / 4.0;
}

double omega_tilde_sq(const ModelParams& p) {
    return p.omega_a * p.omega_a - 4.0 * p.eta0 * p.omega_a;
}

double effective_frequency(const ModelParams& p) {
    const double wt2 = omega_tilde_sq(p);
    if (wt2 < 0.0)
        throw supercritical_parameter(
            "effective_frequency: eta0 exceeds the critical coupling omega_a/4");
    return std::sqrt(wt2);
}

DerivedQuantities derive(const ModelParams& p) {
    const double etac = critical_coupling(p.omega_a);
    return {etac, effective_frequency(p), p.eta0 / etac};
}

cdouble char_poly(const ModelParams& p, double omega) {
    return {omega * omega - omega_tilde_sq(p), p.gamma * omega};
}

double thermal_occupation(double omega, double omega_th) {
    if (!(omega > 0.0))
        throw std::domain_error("thermal_occupation: omega must be positive");
    if (omega_th == 0.0) return 0.0;
    const double x = omega / omega_th;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

std::vector<std::string> validate_report(const ModelParams& p) {
    std::vector<std::string> bad;
    auto fail = [&bad](const std::string& field, const std::string& msg) {
        bad.push_back(field + ": " + msg);
    };
    if (!(p.omega_a > 0.0)) fail("omega_a", "must be > 0");
    if (!(p.gamma >= 0.0)) fail("gamma", "must be >= 0");
    if (!(p.epsilon >= 0.0)) fail("epsilon", "must be >= 0");
    if (!(p.omega_d > 0.0)) fail("omega_d", "must be > 0 (non-positive drive)");
    if (!(p.omega_th >= 0.0)) fail("omega_th", "must be >= 0");
    if (p.n_harmonics < 1) fail("n_harmonics", "must be >= 1");
    if (p.omega_a > 0.0 && !(p.eta0 + p.epsilon < p.omega_a / 4.0))
        fail("eta0+epsilon",
             "modulation crosses the critical point (eta0 + epsilon must stay below omega_a/4)");
    return bad;
}

ModelParams validated(const ModelParams& p) {
    const auto bad = validate_report(p);
    if (bad.empty()) return p;
    std::ostringstream msg;
    msg << "invalid model parameters:";
    for (const auto& b : bad) msg << "\n  " << b;
    throw invalid_parameter(msg.str());
}

}  // namespace qvr
