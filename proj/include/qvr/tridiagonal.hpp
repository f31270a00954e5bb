#ifndef QVR_TRIDIAGONAL_HPP
#define QVR_TRIDIAGONAL_HPP

#include <span>
#include <vector>

#include "qvr/model.hpp"

namespace qvr {

/// Truncated harmonic system of size 2N+1. Row j (stored at index j+N,
/// j = -N..N) has diagonal -D(omega + j*omega_d)/(2*omega_a); both
/// off-diagonals are the constant -epsilon, so the matrix is complex symmetric.
struct TridiagonalSystem {
    int order = 0;  ///< N
    double omega = 0.0;
    double omega_d = 0.0;
    double omega_a = 1.0;
    std::vector<cdouble> diagonal;  ///< size 2N+1
    cdouble off_diagonal{0.0, 0.0};

    int size() const { return 2 * order + 1; }
};

/// Assembles the system at output frequency omega. With gamma = 0 a shifted
/// frequency may sit on a real pole of 1/D; that raises singular_system here.
TridiagonalSystem build_tridiagonal(const ModelParams& p, double omega, int order);

/// LU factorization with partial pivoting (one extra superdiagonal fill-in).
/// Factors once; each solve is O(N). Pivots below
/// pivot_rel_tol * max|diagonal| raise singular_system.
class TridiagonalFactor {
  public:
    explicit TridiagonalFactor(const TridiagonalSystem& sys,
                               double pivot_rel_tol = 1e-13);

    /// Solution of T x = rhs.
    std::vector<cdouble> solve(std::span<const cdouble> rhs) const;

    /// Column of T^{-1}: solution for the unit right-hand side e_{shift+N},
    /// shift in [-N, N]. T is symmetric, so this is also row shift of T^{-1}.
    std::vector<cdouble> unit_solve(int shift) const;

    int size() const { return n_; }
    int order() const { return (n_ - 1) / 2; }

  private:
    int n_;
    std::vector<cdouble> dl_, d_, du_, du2_;
    std::vector<int> pivot_;
};

}  // namespace qvr

#endif
