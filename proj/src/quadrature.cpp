#include "qvr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace qvr {

namespace {

struct GaussRule {
    std::array<double, 15> node{};
    std::array<double, 15> weight{};
};

// Nodes are the roots of P_15 by Newton iteration; weights 2/((1-x^2) P'^2).
GaussRule make_gauss15() {
    GaussRule r;
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& gauss_rule() {
    static const GaussRule r = make_gauss15();
    return r;
}

struct Panel {
    double a, b;
    double whole;   // GL15 over [a, b]
    double left;    // GL15 over the two halves
    double right;
    double err;     // |left + right - whole|

    // Strict weak ordering for the refinement queue; interval start breaks
    // ties so the refinement order is deterministic.
    bool operator<(const Panel& o) const {
        if (err != o.err) return err > o.err;
        return a < o.a;
    }
};

Panel make_panel(const std::function<double(double)>& f, double a, double b,
                 double whole) {
    const double m = 0.5 * (a + b);
    Panel p;
    p.a = a;
    p.b = b;
    p.whole = whole;
    p.left = gauss15(f, a, m);
    p.right = gauss15(f, m, b);
    p.err = std::abs(p.left + p.right - p.whole);
    return p;
}

}  // namespace

double gauss15(const std::function<double(double)>& f, double a, double b) {
    const auto& r = gauss_rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += r.weight[i] * f(c + h * r.node[i]);
    return s * h;
}

double adaptive_integrate(const std::function<double(double)>& f,
                          std::vector<double> breakpoints, const QuadOptions& opt) {
    if (breakpoints.size() < 2)
        throw invalid_parameter("adaptive_integrate: need at least two breakpoints");
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());

    std::multiset<Panel> queue;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        if (!(b > a)) continue;
        queue.insert(make_panel(f, a, b, gauss15(f, a, b)));
    }
    if (queue.empty())
        throw invalid_parameter("adaptive_integrate: empty integration range");

    double total = 0.0, err = 0.0;
    for (const auto& p : queue) {
        total += p.left + p.right;
        err += p.err;
    }
    while (err > std::max(opt.rel_tol * std::abs(total), opt.abs_tol)) {
        if (static_cast<int>(queue.size()) >= opt.max_panels)
            throw integration_error(
                "adaptive_integrate: panel budget exhausted before tolerance");
        auto worst = queue.begin();
        const Panel p = *worst;
        queue.erase(worst);
        const double m = 0.5 * (p.a + p.b);
        const Panel l = make_panel(f, p.a, m, p.left);
        const Panel r = make_panel(f, m, p.b, p.right);
        total += (l.left + l.right + r.left + r.right) - (p.left + p.right);
        err += l.err + r.err - p.err;
        queue.insert(l);
        queue.insert(r);
    }
    double refined = 0.0;
    for (const auto& p : queue) refined += p.left + p.right;
    return refined;
}

}  // namespace qvr
