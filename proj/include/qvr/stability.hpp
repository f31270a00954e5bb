#ifndef QVR_STABILITY_HPP
#define QVR_STABILITY_HPP

#include <Eigen/Dense>
#include <vector>

#include "qvr/model.hpp"
#include "qvr/parallel.hpp"

namespace qvr {

enum class HillParity { even, odd };

/// Harmonic-balance system for the mean-field damped Mathieu equation
///   x'' + gamma x' + [omega_tilde^2 - 4 eps omega_a cos(omega_d t)] x = 0
/// at half-harmonics omega_n = n omega_d / 2. Vanishing determinant marks an
/// instability boundary. Even system variables: (a0, a2, b2, ..., a_{2K}, b_{2K});
/// odd: (a1, b1, ..., a_{2K-1}, b_{2K-1}).
struct HillSystem {
    HillParity parity;
    int pairs;  ///< K, retained harmonic pairs
    Eigen::MatrixXd matrix;
};

HillSystem build_hill(const ModelParams& p, HillParity parity, int pairs);

/// sign(det) in {-1, 0, +1} and log|det|; log-scaled because entries grow
/// like omega_n^2 and the plain determinant overflows for moderate K.
struct SignLogDet {
    double sign;
    double log_abs;
};
SignLogDet hill_determinant(const HillSystem& sys);

struct FloquetOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    long max_steps = 2000000;
    double margin_tol = 1e-9;  ///< |multiplier| within this of 1 is marginal
};

struct FloquetResult {
    bool stable;
    double multiplier;  ///< largest Floquet multiplier magnitude
    bool marginal;      ///< |multiplier| - 1 within margin_tol (kept stable)
};

/// One-period propagator of the mean-field equation over 2 pi / omega_d,
/// integrated with an adaptive Dormand-Prince 5(4) stepper. Valid on both
/// sides of the critical point (uses omega_tilde^2, possibly negative).
Eigen::Matrix2d monodromy_matrix(const ModelParams& p, const FloquetOptions& opt = {});

/// Unstable iff the largest multiplier magnitude exceeds 1 + margin_tol;
/// boundary-sitting cells are classified stable and flagged marginal.
FloquetResult floquet_classify(const ModelParams& p, const FloquetOptions& opt = {});

enum class ScanAxis { epsilon, omega_d };

struct BoundaryPoint {
    double value;  ///< parameter value on the scan axis
    HillParity parity;
};

struct ScanOptions {
    int samples = 120;
    double bisect_rel_tol = 1e-10;
    int pairs = 0;  ///< K; 0 = double K until boundaries move < k_move_tol
    double k_move_tol = 1e-6;
    int max_pairs = 64;
};

/// Sign changes of the even and odd truncated Hill determinants along a 1-D
/// scan, bisected to bisect_rel_tol relative bracket width. An empty result
/// (no sign change in the bracket) is not an error. Determinant zeros track
/// the |multiplier| = 1 crossings at tongue onsets; deep inside an unstable
/// tongue the raw truncated determinant can also vanish without a multiplier
/// crossing, so scans meant as boundary oracles should bracket onsets.
std::vector<BoundaryPoint> hill_boundary_scan(const ModelParams& p, ScanAxis axis,
                                              double lo, double hi,
                                              const ScanOptions& opt = {});

/// |multiplier| = 1 crossings of the Floquet oracle along the same scan.
std::vector<double> floquet_boundary_scan(const ModelParams& p, ScanAxis axis,
                                          double lo, double hi,
                                          const ScanOptions& opt = {},
                                          const FloquetOptions& fopt = {});

enum class Axis2 { eta_ratio, epsilon };

struct StabilityCell {
    bool stable;
    double margin;  ///< largest multiplier magnitude - 1
    bool marginal;
};

struct StabilityMap {
    std::vector<double> omega_d;  ///< axis 1
    std::vector<double> axis2;    ///< axis 2 (eta/eta_c or epsilon)
    Axis2 kind = Axis2::eta_ratio;
    std::vector<StabilityCell> cells;  ///< row-major [axis2][omega_d]

    struct Boundary {
        std::size_t row;  ///< axis2 index
        double omega_d;
        HillParity parity;
    };
    std::vector<Boundary> hill_boundaries;  ///< per-row omega_d scans

    const StabilityCell& at(std::size_t row, std::size_t col) const {
        return cells[row * omega_d.size() + col];
    }
};

/// Classifies every grid cell with the Floquet oracle and overlays the
/// Hill-determinant boundaries scanned along each row.
StabilityMap stability_map(const ModelParams& p, std::vector<double> omega_d_grid,
                           std::vector<double> axis2_grid, Axis2 kind,
                           const ScanOptions& opt = {}, const FloquetOptions& fopt = {},
                           const Exec& ex = {});

}  // namespace qvr

#endif
