#include <doctest.h>

#include <cmath>

#include "qvr/correlators.hpp"

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

}  // namespace

TEST_CASE("no modulation, no temperature, no emission") {
    ModelParams p = make_params(0.8, 3e-2, 0.0);
    for (const double w : {0.05, 0.2, 0.5, 1.3})
        CHECK(flux_density(p, w) == 0.0);
    CHECK(photon_flux(p, {}, SolverOptions{.fixed_order = 2}) == 0.0);
}

TEST_CASE("thermal passivity: unmodulated output keeps the input spectrum") {
    ModelParams p = make_params(0.8, 3e-2, 0.0, 0.08);
    for (int i = 1; i <= 60; ++i) {
        const double w = 0.02 * i;
        const double nbar = thermal_occupation(w, p.omega_th);
        CHECK(flux_density(p, w) == doctest::Approx(nbar).epsilon(1e-10));
    }
}

TEST_CASE("first-harmonic thermal flux matches the four-term expansion") {
    ModelParams p = make_params(0.8, 3e-2, 5.0 / 3.0 * 1e-2, 0.05);
    SolverOptions n1;
    n1.fixed_order = 1;
    for (const double frac : {0.2, 0.45, 0.7, 0.9}) {
        const double w = frac * p.omega_d;
        const auto c = scattering_coefficients(p, w, 1);
        double expected = std::norm(c.coeff(0)) * thermal_occupation(w, p.omega_th) +
                          std::norm(c.coeff(1)) *
                              thermal_occupation(p.omega_d + w, p.omega_th);
        if (w < p.omega_d)
            expected += std::norm(c.coeff(-1)) *
                        (1.0 + thermal_occupation(p.omega_d - w, p.omega_th));
        CHECK(flux_density(p, w, n1) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("weak modulation reproduces the linearized emission density") {
    ModelParams p = make_params(0.8, 3e-2, 1e-3);
    const double peak = effective_frequency(p);
    const double full = flux_density(p, peak);
    const double lin = linearized_flux_density(p, peak);
    CHECK(std::abs(full - lin) / lin < 5e-3);

    // relative deviation shrinks quadratically with epsilon
    ModelParams p2 = make_params(0.8, 3e-2, 5e-4);
    const double dev1 = std::abs(full / lin - 1.0);
    const double dev2 =
        std::abs(flux_density(p2, peak) / linearized_flux_density(p2, peak) - 1.0);
    CHECK(dev1 / dev2 == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("linearized density is exactly symmetric about half the drive") {
    ModelParams p = make_params(0.8, 3e-2, 1e-3);
    p.omega_d = 0.25;  // dyadic grid keeps omega_d - omega exact
    for (int i = 1; i < 64; ++i) {
        const double w = i / 256.0;
        CHECK(linearized_flux_density(p, w) ==
              linearized_flux_density(p, p.omega_d - w));
    }
    CHECK(linearized_flux_density(p, p.omega_d) == 0.0);
    CHECK(linearized_flux_density(p, 1.1 * p.omega_d) == 0.0);
}

TEST_CASE("full spectrum symmetry deviation scales as epsilon^4") {
    const double w = 0.375;
    auto rel_asym = [&](double eps_over_gamma) {
        ModelParams p = make_params(0.8, 3e-2, eps_over_gamma);
        p.omega_d = 1.0;
        const double a = flux_density(p, w, SolverOptions{.fixed_order = 1});
        const double b =
            flux_density(p, p.omega_d - w, SolverOptions{.fixed_order = 1});
        return std::abs(a - b) / std::max(a, b);
    };
    const double r1 = rel_asym(4e-2), r2 = rel_asym(2e-2);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.5));  // asym/value ~ eps^2
    CHECK(r1 < 1e-3);
}

TEST_CASE("detuned drive produces a double-peaked spectrum") {
    ModelParams p = make_params(0.8, 3e-2, 5.0 / 3.0 * 1e-2);
    const double wt = effective_frequency(p);
    p.omega_d = 2.6 * wt;
    std::vector<double> grid;
    for (int i = 1; i < 180; ++i) grid.push_back(p.omega_d * i / 180.0);
    const auto s = flux_density_spectrum(p, grid, SolverOptions{.fixed_order = 4});
    std::vector<double> maxima;
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i)
        if (s.values[i] > s.values[i - 1] && s.values[i] > s.values[i + 1])
            maxima.push_back(s.grid[i]);
    REQUIRE(maxima.size() == 2);
    CHECK(maxima[0] == doctest::Approx(wt).epsilon(0.05));
    CHECK(maxima[1] == doctest::Approx(p.omega_d - wt).epsilon(0.05));
}

TEST_CASE("near criticality the harmonic staircase spans decades") {
    ModelParams p = make_params(0.99, 3e-3, 1.0 / 30.0);
    const double wt = effective_frequency(p);
    const double n1 = flux_density(p, wt);
    const double n2 = flux_density(p, wt + p.omega_d);
    const double n3 = flux_density(p, wt + 2.0 * p.omega_d);
    CHECK(n1 > 100.0 * n2);
    CHECK(n2 > 100.0 * n3);
    CHECK(n3 > 0.0);

    // more harmonics contribute than far from the critical point
    ModelParams far = make_params(0.8, 3e-3, 1.0 / 30.0);
    const double far_wt = effective_frequency(far);
    const double far_n2 = flux_density(far, far_wt + far.omega_d);
    CHECK(n2 / n1 > far_n2 / flux_density(far, far_wt));
}

TEST_CASE("peak emission grows monotonically toward the critical point") {
    double prev = -1.0;
    for (const double eta : {0.5, 0.8, 0.95, 0.99}) {
        ModelParams p = make_params(eta, 3e-2, 5.0 / 3.0 * 1e-2);
        const double peak = flux_density(p, 0.5 * p.omega_d);
        CHECK(peak >= prev);
        prev = peak;
    }
}

TEST_CASE("photon flux converges under grid refinement") {
    ModelParams p = make_params(0.8, 3e-3, 1.0 / 30.0);
    QuadOptions q1;
    const double a = photon_flux(p, {}, {}, q1);
    QuadOptions q2;
    q2.rel_tol = 1e-10;
    const double b = photon_flux(p, {}, {}, q2);
    CHECK(std::abs(a - b) / std::abs(b) < 1e-6);
}

TEST_CASE("anomalous correlator selection rule") {
    ModelParams p = make_params(0.9, 3e-2, 1.0 / 30.0);
    SUBCASE("zero modulation") {
        ModelParams q = p;
        q.epsilon = 0.0;
        CHECK(anomalous_correlator(q, 0.4 * q.omega_d, 0.6 * q.omega_d) ==
              cdouble{0.0, 0.0});
    }
    SUBCASE("non-integer frequency sum") {
        const double w1 = 0.5 * p.omega_d;
        const double w2 = 0.87 * p.omega_d;  // sum = 1.37 omega_d
        CHECK(anomalous_correlator(p, w1, w2) == cdouble{0.0, 0.0});
    }
    SUBCASE("matched pair against the closed-form product") {
        const double dw = 0.11 * p.omega_d;
        const double wm = 0.5 * p.omega_d - dw, wp = 0.5 * p.omega_d + dw;
        SolverOptions n1;
        n1.fixed_order = 1;
        const auto got = anomalous_correlator(p, wm, wp, n1);
        const auto cm = analytic_first_harmonic(p, wm);
        const auto cp = analytic_first_harmonic(p, wp);
        const cdouble expected = cm.coeff(0) * cp.coeff(-1);
        CHECK(std::abs(got - expected) / std::abs(expected) < 1e-10);
    }
    SUBCASE("matching works within the selection tolerance") {
        const double w1 = 0.5 * p.omega_d;
        const double w2 = 0.5 * p.omega_d + 1e-12;  // inside 1e-9 * omega_a
        CHECK(std::abs(anomalous_correlator(p, w1, w2)) > 0.0);
        const double w3 = 0.5 * p.omega_d + 1e-6;  // outside
        CHECK(anomalous_correlator(p, w1, w3) == cdouble{0.0, 0.0});
    }
    SUBCASE("pair_correlation records the matched harmonic") {
        const auto pc = pair_correlation(p, 0.4 * p.omega_d, 1.6 * p.omega_d);
        CHECK(pc.m == 2);
        const auto none = pair_correlation(p, 0.4 * p.omega_d, 0.9 * p.omega_d);
        CHECK(none.m == 0);
        CHECK(none.value == cdouble{0.0, 0.0});
    }
}

TEST_CASE("voltage-noise integrand") {
    ModelParams far = make_params(0.8, 3e-2, 1.0 / 30.0, 0.08);
    far.omega_d = 3.0 * effective_frequency(far);
    ModelParams near = make_params(0.99, 3e-2, 1.0 / 30.0, 0.08);
    near.omega_d = 3.0 * effective_frequency(near);

    SUBCASE("vanishes without modulation") {
        ModelParams q = far;
        q.epsilon = 0.0;
        CHECK(voltage_noise_integrand(q, 0.1 * q.omega_d) == 0.0);
    }
    SUBCASE("enhanced near the critical point at matched relative frequency") {
        const double f = voltage_noise_integrand(far, 0.1 * far.omega_d);
        const double n = voltage_noise_integrand(near, 0.1 * near.omega_d);
        CHECK(std::abs(n) > std::abs(f));
    }
    SUBCASE("symmetric pair ordering leaves the value unchanged") {
        const double dw = 0.13 * far.omega_d;
        const cdouble a =
            anomalous_correlator(far, 0.5 * far.omega_d - dw, 0.5 * far.omega_d + dw);
        const cdouble b =
            anomalous_correlator(far, 0.5 * far.omega_d + dw, 0.5 * far.omega_d - dw);
        CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
    SUBCASE("domain guard") {
        CHECK_THROWS_AS(voltage_noise_integrand(far, 0.6 * far.omega_d),
                        invalid_parameter);
    }
}

TEST_CASE("resonant drive helper") {
    ModelParams p = make_params(0.91, 1e-2, 1e-2);
    CHECK(resonant_drive(p) == doctest::Approx(2.0 * effective_frequency(p)));
    CHECK(resonant_drive(p, 3) ==
          doctest::Approx(2.0 * effective_frequency(p) / 3.0));
    CHECK_THROWS_AS(resonant_drive(p, 0), invalid_parameter);
}
