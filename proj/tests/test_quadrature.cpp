#include <doctest.h>

#include <cmath>

#include "qvr/quadrature.hpp"

using namespace qvr;

TEST_CASE("integrates smooth functions to tolerance") {
    const double s = adaptive_integrate([](double x) { return std::sin(x); },
                                        {0.0, M_PI});
    CHECK(s == doctest::Approx(2.0).epsilon(1e-12));

    const double q = adaptive_integrate([](double x) { return x * x; }, {0.0, 3.0});
    CHECK(q == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("narrow Lorentzian against the arctan closed form") {
    const double g = 1e-4, c = 0.37;
    auto f = [g, c](double x) {
        const double d = x - c;
        return g / (d * d + g * g);
    };
    const double exact = std::atan((1.0 - c) / g) + std::atan(c / g);
    // a breakpoint at the peak seeds the refinement
    const double got = adaptive_integrate(f, {0.0, c, 1.0});
    CHECK(got == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("refinement is stable under extra breakpoints") {
    const double g = 3e-3;
    auto f = [g](double x) {
        double s = 0.0;
        for (const double c : {0.1, 0.3, 0.5}) s += g / ((x - c) * (x - c) + g * g);
        return s;
    };
    const double a = adaptive_integrate(f, {0.01, 0.1, 0.3, 0.5, 0.9});
    const double b = adaptive_integrate(
        f, {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9});
    CHECK(std::abs(a - b) / std::abs(b) < 1e-8);
}

TEST_CASE("panel exhaustion raises integration_error") {
    QuadOptions opt;
    opt.max_panels = 4;
    opt.rel_tol = 1e-14;
    auto f = [](double x) { return std::sin(200.0 * x) * std::exp(x); };
    CHECK_THROWS_AS(adaptive_integrate(f, {0.0, 7.0}, opt), integration_error);
}

TEST_CASE("bad ranges are rejected") {
    CHECK_THROWS_AS(adaptive_integrate([](double) { return 1.0; }, {1.0}),
                    invalid_parameter);
    CHECK_THROWS_AS(adaptive_integrate([](double) { return 1.0; }, {1.0, 1.0}),
                    invalid_parameter);
}
