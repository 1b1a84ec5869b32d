#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gridmap.hpp"
#include "report.hpp"

namespace mhf {

/// Pointwise differential: target_dim x domain_dim, stack-allocated.
using SmallMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 8, 4>;

/// Normalization constants of the fold-n operator and energies.
/// n+1 is the domain dimension throughout.
inline double energy_density_const(int n) {
    return std::pow(n + 1.0, -(n + 1.0) / 2.0);
}
inline double mcr_leading_const(int n) {
    return std::pow(n + 1.0, -(n - 1.0) / 2.0);
}
inline double mix_quotient_const(int n) {
    return 0.5 * std::pow(n + 1.0, (n - 3.0) / 2.0);
}
/// <du, mcr(du)> = (n+1) (e_{n+1} - pullback) pointwise, so the identity gap
/// term carries 1/(n+1).
inline double gap_const(int n) { return 1.0 / (n + 1.0); }

/// Nearest-lift representative of a torus difference in [-1/2, 1/2).
inline double unwrap_delta(double delta) { return delta - std::floor(delta + 0.5); }

/// Central-difference differential at a node (second-order one-sided at
/// non-periodic boundaries), with per-edge nearest-lift unwrapping.
SmallMat finite_diff_jacobian(const GridMap& m, int64_t node);

/// First-order residual of the fold-n operator at a single differential:
///   c1 |du|^{n-1} du - (-1)^n J o Lambda^n_std(du) o star.
SmallMat mcr_residual(const Triad& t, const SmallMat& du);

/// omega pulled back through du, evaluated on the unit domain volume.
double pullback_density(const Triad& t, const SmallMat& du);

/// Squared Hilbert-Schmidt norm of Lambda^n_std(du).
double lambda_power_norm_sq(const SmallMat& du, int n);

/// Per-node jets of a grid map (structure-of-arrays; du and mcr are stored
/// column-major per node).
struct JetField {
    int64_t count = 0;
    int d = 0, m = 0, n = 0;
    double eps_crit = 0.0; // 1e-8 * max |du|
    std::vector<double> du, mcr;
    std::vector<double> du_norm, lambda_wc, e_np1, e_mix, pullback, gap_density,
        mcr_norm;

    SmallMat du_at(int64_t node) const;
    SmallMat mcr_at(int64_t node) const;
};

JetField compute_jets(const GridMap& m);

struct DistortionRecord {
    double distortion_max = 0.0;
    double quasiregular_q = 0.0;
    double outer_dilation = 0.0;
    double cr_residual = 0.0; // endomorphisms only
    int64_t regular_nodes = 0;
    bool endo = false;
};

/// Aggregated diagnostics. The energy is the nodal quadrature of its
/// density; pullback_integral, identity_gap and mix_gap are cell-midpoint
/// quadratures from cell-centered jets (falling back to nodal quadrature
/// when an axis is non-periodic), so the reported identity residual
/// energy_np1 - identity_gap - pullback_integral measures the scheme's
/// quadrature error rather than cancelling identically.
struct DiagnosticsReport {
    double energy_np1 = 0.0;
    double energy_mix = 0.0;
    double pullback_integral = 0.0;
    double identity_gap = 0.0;
    double mix_gap = 0.0;
    double max_mcr_residual = 0.0;
    double max_weak_conformal_residual = 0.0;
    DistortionRecord distortion;
    double critical_tol = 0.0;
    std::vector<int64_t> critical_nodes;
    int64_t node_count = 0;

    KvReport to_report() const;
};

DiagnosticsReport energy_report(const GridMap& m);

/// Max over nodes of the spectral norm of du^T du - (|du|^2/(n+1)) I.
double weak_conformal_check(const GridMap& m);

/// Singular-value diagnostics; throws DistortionUndefined when every node is
/// critical. cr_residual is computed only for endomorphisms.
DistortionRecord distortion_report(const GridMap& m, bool endo);

/// Nodes with |du| below the given absolute threshold.
std::vector<int64_t> critical_locus(const GridMap& m, double tol);

/// Divergence (central differences, periodic wrap) of the flux
/// |du|^{p-2} du; one d-vector per node. p > 1.
std::vector<double> p_laplacian(const GridMap& m, double p);

/// Orientation-preserving similarity of the periodic lattice:
/// phi(x) = scale * R x + shift/N with R a signed axis permutation,
/// conformal factor mu = scale.
struct LatticeSimilarity {
    int scale = 1;
    std::array<int, 4> perm{0, 1, 2, 3};
    std::array<int, 4> sign{1, 1, 1, 1};
    std::array<int, 4> shift{0, 0, 0, 0};

    static LatticeSimilarity translation(const std::array<int, 4>& shift);
};

/// Max-node Frobenius norm of mcr(u o phi) - mu^{n-1} mcr(u)(phi(.)) o dphi.
double conformal_equivariance_check(const GridMap& m, const LatticeSimilarity& phi);

/// The composed sample (u o phi); exposed for tests.
GridMap compose_with_similarity(const GridMap& m, const LatticeSimilarity& phi);

} // namespace mhf
