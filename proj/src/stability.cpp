#include "qvr/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qvr {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

HillSystem build_hill(const ModelParams& p, HillParity parity, int pairs) {
    if (pairs < 1) throw invalid_parameter("build_hill: pairs must be >= 1");
    const double wt2 = omega_tilde_sq(p);
    const double g = p.gamma;
    const double cpl = 2.0 * p.epsilon * p.omega_a;
    const double half_wd = 0.5 * p.omega_d;

    HillSystem sys;
    sys.parity = parity;
    sys.pairs = pairs;

    if (parity == HillParity::even) {
        // Variables (a0, a2, b2, a4, b4, ...); b0 = 0 drops its row.
        const int n = 2 * pairs + 1;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        m(0, 0) = wt2;
        m(0, 1) = -2.0 * cpl;  // a0 row: wt2*a0 - 4 eps wa a2 = 0
        for (int k = 1; k <= pairs; ++k) {
            const double wn = 2.0 * k * half_wd;
            const int ia = 2 * k - 1, ib = 2 * k;
            m(ia, ia) = wt2 - wn * wn;
            m(ia, ib) = g * wn;
            m(ib, ib) = wt2 - wn * wn;
            m(ib, ia) = -g * wn;
            if (k == 1) {
                m(ia, 0) = -cpl;  // couples to a0; no b0 counterpart
            } else {
                m(ia, 2 * k - 3) = -cpl;
                m(ib, 2 * k - 2) = -cpl;
            }
            if (k < pairs) {
                m(ia, 2 * k + 1) = -cpl;
                m(ib, 2 * k + 2) = -cpl;
            }
        }
        sys.matrix = std::move(m);
    } else {
        // Variables (a1, b1, a3, b3, ...) with a_{-1} = a1, b_{-1} = -b1
        // folded into the n = 1 diagonal.
        const int n = 2 * pairs;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < pairs; ++k) {
            const double wn = (2.0 * k + 1.0) * half_wd;
            const int ia = 2 * k, ib = 2 * k + 1;
            m(ia, ia) = wt2 - wn * wn;
            m(ia, ib) = g * wn;
            m(ib, ib) = wt2 - wn * wn;
            m(ib, ia) = -g * wn;
            if (k == 0) {
                m(ia, ia) -= cpl;
                m(ib, ib) += cpl;
            } else {
                m(ia, 2 * k - 2) = -cpl;
                m(ib, 2 * k - 1) = -cpl;
            }
            if (k < pairs - 1) {
                m(ia, 2 * k + 2) = -cpl;
                m(ib, 2 * k + 3) = -cpl;
            }
        }
        sys.matrix = std::move(m);
    }
    return sys;
}

SignLogDet hill_determinant(const HillSystem& sys) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
    double sign = lu.permutationP().determinant();
    double log_abs = 0.0;
    const auto& u = lu.matrixLU();
    for (int i = 0; i < u.rows(); ++i) {
        const double d = u(i, i);
        if (d == 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
        if (d < 0.0) sign = -sign;
        log_abs += std::log(std::abs(d));
    }
    return {sign, log_abs};
}

namespace {

using Vec2 = Eigen::Vector2d;

// Dormand-Prince 5(4) with standard PI-free step control.
class Dopri5 {
  public:
    Dopri5(std::function<Vec2(double, const Vec2&)> f, double rtol, double atol,
           long max_steps)
        : f_(std::move(f)), rtol_(rtol), atol_(atol), max_steps_(max_steps) {}

    Vec2 integrate(Vec2 y, double t0, double t1) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                                c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                                e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;

        double t = t0;
        double h = (t1 - t0) / 100.0;
        Vec2 k1 = f_(t, y);
        long steps = 0;
        while (t < t1) {
            if (++steps > max_steps_)
                throw integration_error("floquet integrator: step budget exhausted");
            h = std::min(h, t1 - t);
            const Vec2 k2 = f_(t + c2 * h, y + h * (a21 * k1));
            const Vec2 k3 = f_(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
            const Vec2 k4 = f_(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Vec2 k5 =
                f_(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Vec2 k6 = f_(
                t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Vec2 ynew =
                y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Vec2 k7 = f_(t + h, ynew);
            const Vec2 errv =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double sc =
                    atol_ + rtol_ * std::max(std::abs(y(i)), std::abs(ynew(i)));
                err = std::max(err, std::abs(errv(i)) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y = ynew;
                k1 = k7;  // FSAL
            }
            const double fac =
                std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            h *= fac;
            if (!(h > 0.0) || t + h == t)
                throw integration_error("floquet integrator: step size underflow");
        }
        return y;
    }

  private:
    std::function<Vec2(double, const Vec2&)> f_;
    double rtol_, atol_;
    long max_steps_;
};

}  // namespace

Eigen::Matrix2d monodromy_matrix(const ModelParams& p, const FloquetOptions& opt) {
    if (!(p.omega_d > 0.0))
        throw invalid_parameter("monodromy_matrix: omega_d must be positive");
    const double wt2 = omega_tilde_sq(p);
    const double drive = 4.0 * p.epsilon * p.omega_a;
    const double g = p.gamma;
    const double wd = p.omega_d;
    auto rhs = [wt2, drive, g, wd](double t, const Vec2& y) {
        return Vec2(y(1), -g * y(1) - (wt2 - drive * std::cos(wd * t)) * y(0));
    };
    const Dopri5 ode(rhs, opt.rtol, opt.atol, opt.max_steps);
    const double period = kTwoPi / wd;
    Eigen::Matrix2d m;
    m.col(0) = ode.integrate(Vec2(1.0, 0.0), 0.0, period);
    m.col(1) = ode.integrate(Vec2(0.0, 1.0), 0.0, period);
    return m;
}

FloquetResult floquet_classify(const ModelParams& p, const FloquetOptions& opt) {
    const Eigen::Matrix2d m = monodromy_matrix(p, opt);
    const double tr = m.trace(), det = m.determinant();
    const double disc = tr * tr - 4.0 * det;
    double mult;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        mult = std::max(std::abs(0.5 * (tr + s)), std::abs(0.5 * (tr - s)));
    } else {
        mult = std::sqrt(det);  // complex pair: |lambda|^2 = det
    }
    FloquetResult r;
    r.multiplier = mult;
    r.marginal = std::abs(mult - 1.0) <= opt.margin_tol;
    r.stable = mult <= 1.0 + opt.margin_tol;
    return r;
}

namespace {

ModelParams with_axis(const ModelParams& p, ScanAxis axis, double x) {
    ModelParams q = p;
    if (axis == ScanAxis::epsilon)
        q.epsilon = x;
    else
        q.omega_d = x;
    return q;
}

double bisect(const std::function<double(double)>& f, double a, double b, double fa,
              double rel_tol) {
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (b - a <= rel_tol * std::abs(m)) return m;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> scan_sign_changes(const std::function<double(double)>& f,
                                      double lo, double hi, int samples,
                                      double rel_tol) {
    std::vector<double> roots;
    double x0 = lo, f0 = f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double x1 = lo + (hi - lo) * i / samples;
        const double f1 = f(x1);
        if (f0 == 0.0)
            roots.push_back(x0);
        else if (f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0))
            roots.push_back(bisect(f, x0, x1, f0, rel_tol));
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

std::vector<BoundaryPoint> hill_scan_at_pairs(const ModelParams& p, ScanAxis axis,
                                              double lo, double hi,
                                              const ScanOptions& opt, int pairs) {
    std::vector<BoundaryPoint> out;
    for (const auto parity : {HillParity::even, HillParity::odd}) {
        auto f = [&](double x) {
            const auto sys = build_hill(with_axis(p, axis, x), parity, pairs);
            return hill_determinant(sys).sign;
        };
        for (const double r :
             scan_sign_changes(f, lo, hi, opt.samples, opt.bisect_rel_tol))
            out.push_back({r, parity});
    }
    std::sort(out.begin(), out.end(),
              [](const BoundaryPoint& a, const BoundaryPoint& b) {
                  return a.value < b.value;
              });
    return out;
}

}  // namespace

std::vector<BoundaryPoint> hill_boundary_scan(const ModelParams& p, ScanAxis axis,
                                              double lo, double hi,
                                              const ScanOptions& opt) {
    if (!(hi > lo)) throw invalid_parameter("hill_boundary_scan: need lo < hi");
    if (opt.pairs > 0) return hill_scan_at_pairs(p, axis, lo, hi, opt, opt.pairs);

    // Double K until every boundary moves by less than k_move_tol relative.
    int pairs = 4;
    auto prev = hill_scan_at_pairs(p, axis, lo, hi, opt, pairs);
    while (2 * pairs <= opt.max_pairs) {
        auto next = hill_scan_at_pairs(p, axis, lo, hi, opt, 2 * pairs);
        bool settled = prev.size() == next.size();
        if (settled) {
            for (std::size_t i = 0; i < prev.size(); ++i) {
                if (std::abs(next[i].value - prev[i].value) >
                    opt.k_move_tol * std::abs(next[i].value)) {
                    settled = false;
                    break;
                }
            }
        }
        if (settled) return next;
        prev = std::move(next);
        pairs *= 2;
    }
    return prev;
}

std::vector<double> floquet_boundary_scan(const ModelParams& p, ScanAxis axis,
                                          double lo, double hi,
                                          const ScanOptions& opt,
                                          const FloquetOptions& fopt) {
    if (!(hi > lo)) throw invalid_parameter("floquet_boundary_scan: need lo < hi");
    auto f = [&](double x) {
        return floquet_classify(with_axis(p, axis, x), fopt).multiplier - 1.0;
    };
    return scan_sign_changes(f, lo, hi, opt.samples, opt.bisect_rel_tol);
}

StabilityMap stability_map(const ModelParams& p, std::vector<double> omega_d_grid,
                           std::vector<double> axis2_grid, Axis2 kind,
                           const ScanOptions& opt, const FloquetOptions& fopt,
                           const Exec& ex) {
    if (omega_d_grid.empty() || axis2_grid.empty())
        throw invalid_parameter("stability_map: empty axis grid");
    StabilityMap map;
    map.omega_d = std::move(omega_d_grid);
    map.axis2 = std::move(axis2_grid);
    map.kind = kind;
    map.cells.resize(map.omega_d.size() * map.axis2.size());

    auto cell_params = [&](std::size_t row, double wd) {
        ModelParams q = p;
        q.omega_d = wd;
        if (kind == Axis2::eta_ratio)
            q.eta0 = map.axis2[row] * critical_coupling(q.omega_a);
        else
            q.epsilon = map.axis2[row];
        return q;
    };

    const std::size_t ncols = map.omega_d.size();
    for_each_index(
        map.cells.size(),
        [&](std::size_t i) {
            const std::size_t row = i / ncols, col = i % ncols;
            const auto r = floquet_classify(cell_params(row, map.omega_d[col]), fopt);
            map.cells[i] = {r.stable, r.multiplier - 1.0, r.marginal};
        },
        ex);

    if (map.omega_d.size() >= 2) {
        const double lo = map.omega_d.front(), hi = map.omega_d.back();
        for (std::size_t row = 0; row < map.axis2.size(); ++row) {
            ScanOptions row_opt = opt;
            row_opt.samples = std::max<int>(opt.samples,
                                            static_cast<int>(2 * map.omega_d.size()));
            for (const auto& b :
                 hill_boundary_scan(cell_params(row, lo), ScanAxis::omega_d, lo, hi,
                                    row_opt))
                map.hill_boundaries.push_back({row, b.value, b.parity});
        }
    }
    return map;
}

}  // namespace qvr
