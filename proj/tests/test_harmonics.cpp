#include <doctest.h>

#include <cmath>
#include <random>

#include "qvr/correlators.hpp"
#include "qvr/harmonics.hpp"

using namespace qvr;

namespace {

ModelParams make_params(double eta_ratio, double gamma, double eps_over_gamma,
                        double wth = 0.0) {
    ModelParams p;
    p.eta0 = eta_ratio * 0.25;
    p.gamma = gamma;
    p.epsilon = eps_over_gamma * gamma;
    p.omega_th = wth;
    p.omega_d = 2.0 * effective_frequency(p);
    return p;
}

double rel_err(cdouble a, cdouble b) {
    const double scale = std::max(std::abs(b), 1e-300);
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("general solver at N = 1 matches the closed-form coefficients") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> eta(0.1, 0.99), lg(-3.0, -1.0),
        le(-3.0, -0.7);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p;
        p.eta0 = eta(rng) * 0.25;
        p.gamma = std::pow(10.0, lg(rng));
        p.epsilon = std::pow(10.0, le(rng)) * p.gamma;
        p.omega_d = 2.0 * effective_frequency(p);
        for (int i = 1; i <= 50; ++i) {
            const double w = p.omega_d * i / 51.0;
            const auto general = scattering_coefficients(p, w, 1);
            const auto closed = analytic_first_harmonic(p, w);
            for (int j = -1; j <= 1; ++j)
                CHECK(rel_err(general.coeff(j), closed.coeff(j)) < 1e-10);
        }
    }
}

TEST_CASE("zero modulation reflects with k0 = 1 - 2 i gamma omega / D") {
    ModelParams p = make_params(0.8, 3e-2, 0.0);
    const double w = 0.37 * p.omega_d;
    const auto c = scattering_coefficients(p, w, 3);
    const cdouble expected = 1.0 - cdouble{0.0, 2.0 * p.gamma * w} / char_poly(p, w);
    CHECK(rel_err(c.coeff(0), expected) < 1e-14);
    for (int j = -3; j <= 3; ++j)
        if (j != 0) CHECK(std::abs(c.coeff(j)) == 0.0);
    // passive scattering has unit reflection magnitude
    CHECK(std::abs(c.coeff(0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("linearized limit of the first-harmonic closed form") {
    ModelParams p = make_params(0.8, 3e-2, 1e-4);
    const double w = 0.42 * p.omega_d;
    const auto c = analytic_first_harmonic(p, w);
    const cdouble D0 = char_poly(p, w);
    const cdouble D1 = char_poly(p, w + p.omega_d);
    const cdouble Dm1 = char_poly(p, w - p.omega_d);
    const cdouble i4eg{0.0, 4.0 * p.epsilon * p.gamma * p.omega_a};
    const cdouble k0_lin = 1.0 - cdouble{0.0, 2.0 * p.gamma * w} / D0;
    const cdouble k1_lin = i4eg * std::sqrt(w * (w + p.omega_d)) / (D0 * D1);
    const cdouble km1_lin = i4eg * std::sqrt(w * (p.omega_d - w)) / (D0 * Dm1);
    CHECK(rel_err(c.coeff(0), k0_lin) < 1e-6);
    CHECK(rel_err(c.coeff(1), k1_lin) < 1e-6);
    CHECK(rel_err(c.coeff(-1), km1_lin) < 1e-6);
}

TEST_CASE("first-harmonic closed form guards its regime") {
    ModelParams p = make_params(0.8, 3e-2, 1e-2);
    CHECK_THROWS_AS(analytic_first_harmonic(p, p.omega_d), out_of_regime);
    CHECK_THROWS_AS(analytic_first_harmonic(p, 1.2 * p.omega_d), out_of_regime);
    CHECK_THROWS_AS(analytic_first_harmonic(p, 0.0), out_of_regime);
}

TEST_CASE("undamped unmodulated mode does not scatter") {
    ModelParams p = make_params(0.64, 0.0, 0.0);
    p.gamma = 0.0;
    p.epsilon = 0.0;
    const auto c = analytic_first_harmonic(p, 0.31 * p.omega_d);
    CHECK(c.coeff(0) == cdouble{1.0, 0.0});
}

TEST_CASE("k_{-1} magnitude peaks at half the resonant drive") {
    ModelParams p = make_params(0.8, 3e-2, 1e-3);
    double best_w = 0.0, best = -1.0;
    for (int i = 1; i < 200; ++i) {
        const double w = p.omega_d * i / 200.0;
        const double mag = std::abs(analytic_first_harmonic(p, w).coeff(-1));
        if (mag > best) {
            best = mag;
            best_w = w;
        }
    }
    CHECK(best_w == doctest::Approx(0.5 * p.omega_d).epsilon(0.02));
}

TEST_CASE("|k_j| scales as epsilon^|j| in the weak-modulation limit") {
    const double w_frac = 0.43;
    for (const int j : {-1, -2, 2, -3}) {
        std::vector<double> le, lk;
        for (double eg = 1e-4; eg <= 1.01e-2; eg *= std::sqrt(10.0)) {
            ModelParams p = make_params(0.8, 3e-2, eg);
            const auto c = scattering_coefficients(p, w_frac * p.omega_d, 4);
            le.push_back(std::log(p.epsilon));
            lk.push_back(std::log(std::abs(c.coeff(j))));
        }
        // least-squares slope over two decades
        const auto n = static_cast<double>(le.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < le.size(); ++i) {
            sx += le[i];
            sy += lk[i];
            sxx += le[i] * le[i];
            sxy += le[i] * lk[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope == doctest::Approx(std::abs(j)).epsilon(0.05 / std::abs(j)));
    }
}

TEST_CASE("commutator sum rule holds at any truncation") {
    ModelParams p = make_params(0.95, 3e-3, 0.08);
    for (const int order : {1, 2, 4, 8}) {
        const auto c = scattering_coefficients(p, 0.37 * p.omega_d, order);
        CHECK(sum_rule_deviation(c) < 1e-12);
    }
}

TEST_CASE("convergence search certifies the initial order when nothing moves") {
    ModelParams p = make_params(0.8, 3e-2, 0.0);
    const auto c = converged_coefficients(p, 0.3 * p.omega_d);
    CHECK(c.order == 2);
}

TEST_CASE("far from criticality a small truncation suffices") {
    ModelParams p = make_params(0.5, 3e-3, 1.0 / 30.0);
    const auto c = converged_coefficients(p, 0.37 * p.omega_d);
    CHECK(c.order <= 4);
}

TEST_CASE("criticality demands a deeper truncation at matched tolerance") {
    ModelParams far = make_params(0.5, 3e-3, 1.0 / 30.0);
    ModelParams near = make_params(0.99, 3e-3, 1.0 / 30.0);
    const int n_far = converged_coefficients(far, 0.8 * far.omega_d).order;
    const int n_near = converged_coefficients(near, 0.8 * near.omega_d).order;
    CHECK(n_near > n_far);
}

TEST_CASE("non-convergence error carries the ceiling") {
    ModelParams p = make_params(0.95, 3e-3, 0.3);  // inside the instability tongue
    SolverOptions opt;
    opt.max_order = 8;
    opt.rel_tol = 1e-14;
    CHECK_THROWS_AS(converged_coefficients(p, 0.5 * p.omega_d, opt), non_convergence);
}

TEST_CASE("a channel sitting exactly at zero frequency carries no amplitude") {
    ModelParams p = make_params(0.8, 3e-2, 1e-2);
    const auto c = scattering_coefficients(p, p.omega_d, 2);  // j = -1 lands on 0
    CHECK(c.coeff(-1) == cdouble{0.0, 0.0});
    CHECK(std::abs(c.coeff(0)) > 0.0);
}

TEST_CASE("coefficients are continuous across a channel sign change") {
    // channel j = -1 flips creation/annihilation at omega = omega_d
    ModelParams p = make_params(0.8, 3e-2, 1e-2);
    const double eps = 1e-7 * p.omega_d;
    const auto below = scattering_coefficients(p, p.omega_d - eps, 3);
    const auto above = scattering_coefficients(p, p.omega_d + eps, 3);
    for (int j = -3; j <= 3; ++j)
        CHECK(std::abs(std::abs(below.coeff(j)) - std::abs(above.coeff(j))) < 1e-4);
}
