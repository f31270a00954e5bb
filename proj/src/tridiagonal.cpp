#include "qvr/tridiagonal.hpp"

#include <cmath>
#include <sstream>

namespace qvr {

TridiagonalSystem build_tridiagonal(const ModelParams& p, double omega, int order) {
    if (order < 1) throw invalid_parameter("build_tridiagonal: order must be >= 1");
    TridiagonalSystem sys;
    sys.order = order;
    sys.omega = omega;
    sys.omega_d = p.omega_d;
    sys.omega_a = p.omega_a;
    sys.off_diagonal = cdouble{-p.epsilon, 0.0};
    sys.diagonal.resize(2 * order + 1);
    const double pole_tol = 1e-12 * p.omega_a * p.omega_a;
    for (int j = -order; j <= order; ++j) {
        const cdouble D = char_poly(p, omega + j * p.omega_d);
        if (p.gamma == 0.0 && std::abs(D) < pole_tol) {
            std::ostringstream msg;
            msg << "build_tridiagonal: undamped pole at channel j=" << j
                << " (omega + j*omega_d = " << omega + j * p.omega_d << ")";
            throw singular_system(msg.str());
        }
        sys.diagonal[j + order] = -D / (2.0 * p.omega_a);
    }
    return sys;
}

TridiagonalFactor::TridiagonalFactor(const TridiagonalSystem& sys, double pivot_rel_tol)
    : n_(sys.size()),
      dl_(n_ > 1 ? n_ - 1 : 0, sys.off_diagonal),
      d_(sys.diagonal),
      du_(n_ > 1 ? n_ - 1 : 0, sys.off_diagonal),
      du2_(n_ > 2 ? n_ - 2 : 0, cdouble{0.0, 0.0}),
      pivot_(n_, 0) {
    double dmax = 0.0;
    for (const auto& d : sys.diagonal) dmax = std::max(dmax, std::abs(d));
    const double tol = pivot_rel_tol * dmax;

    for (int i = 0; i < n_; ++i) pivot_[i] = i;
    for (int i = 0; i + 1 < n_; ++i) {
        if (std::abs(d_[i]) >= std::abs(dl_[i])) {
            if (std::abs(d_[i]) <= tol)
                throw singular_system("tridiagonal factorization: pivot below tolerance");
            const cdouble fact = dl_[i] / d_[i];
            dl_[i] = fact;
            d_[i + 1] -= fact * du_[i];
            if (i + 2 < n_) du2_[i] = cdouble{0.0, 0.0};
        } else {
            const cdouble fact = d_[i] / dl_[i];
            d_[i] = dl_[i];
            dl_[i] = fact;
            const cdouble tmp = du_[i];
            du_[i] = d_[i + 1];
            d_[i + 1] = tmp - fact * d_[i + 1];
            if (i + 2 < n_) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -fact * du_[i + 1];
            }
            pivot_[i] = i + 1;
        }
    }
    if (std::abs(d_[n_ - 1]) <= tol)
        throw singular_system("tridiagonal factorization: last pivot below tolerance");
}

std::vector<cdouble> TridiagonalFactor::solve(std::span<const cdouble> rhs) const {
    if (static_cast<int>(rhs.size()) != n_)
        throw invalid_parameter("tridiagonal solve: rhs size mismatch");
    std::vector<cdouble> b(rhs.begin(), rhs.end());
    for (int i = 0; i + 1 < n_; ++i) {
        if (pivot_[i] == i) {
            b[i + 1] -= dl_[i] * b[i];
        } else {
            const cdouble tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - dl_[i] * b[i];
        }
    }
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (int i = n_ - 3; i >= 0; --i)
        b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    return b;
}

std::vector<cdouble> TridiagonalFactor::unit_solve(int shift) const {
    const int idx = shift + order();
    if (idx < 0 || idx >= n_)
        throw invalid_parameter("tridiagonal unit_solve: shift out of range");
    std::vector<cdouble> e(n_, cdouble{0.0, 0.0});
    e[idx] = cdouble{1.0, 0.0};
    return solve(e);
}

}  // namespace qvr
