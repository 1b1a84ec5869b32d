#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "multivector.hpp"
#include "report.hpp"

namespace mhf {

enum class TriadFamily { hermitian, conformal, associative, cayley };

const char* family_name(TriadFamily f);
TriadFamily parse_family(const std::string& name); // throws UnsupportedTriadError

/// A compatible n-triad on flat R^d: an alternating (n+1)-form omega together
/// with the split product (J, K) it induces against the orthonormal metric,
///
///   g(J(zeta), B)        = omega(zeta ^ B)     for zeta in Lambda^n, B in TM,
///   <zeta, K(A)>_Lambda  = omega(A ^ zeta)     for A in TM,
///
/// so that J o K = (-1)^n lambda I with lambda > 0.
///
/// Four families are constructed:
///   hermitian   (d even, n = 1): omega = sum of coordinate-pair 2-forms,
///                                J the standard complex structure;
///   conformal   (any d, n = d-1): omega the volume form, J = K = hodge star;
///   associative (d = 7, n = 2):  the G2 3-form built from the octonion
///                                cross product, lambda = 3;
///   cayley      (d = 8, n = 3):  the Spin7 4-form built from the triple
///                                cross product, lambda = 7.
///
/// Sign conventions downstream of the octonion basis order are frozen here;
/// in particular the cayley form evaluates to -1 on the oriented frame
/// (1, i, j, k).
class Triad {
public:
    static Triad make(TriadFamily family, int dim);
    static std::shared_ptr<const Triad> make_shared(TriadFamily family, int dim);

    /// Build from a raw coefficient table without the construction-time
    /// split-product assertion. check_compatibility reports where such a
    /// table breaks the axioms; make() refuses to return one that does.
    static Triad from_omega(TriadFamily family, int dim, int n, Eigen::VectorXd omega);

    TriadFamily family() const { return family_; }
    int dim() const { return dim_; }
    int fold() const { return n_; }
    double lambda() const { return lambda_; }

    /// Coefficients of omega over sorted (n+1)-tuples, lex order.
    const Eigen::VectorXd& omega() const { return omega_; }
    /// Sparse view: (coefficient rank, value) for nonzero entries.
    const std::vector<std::pair<int, double>>& omega_sparse() const { return omega_nz_; }

    /// omega evaluated on n+1 vectors (multilinear, alternating).
    double omega_eval(const std::vector<Eigen::VectorXd>& vectors) const;
    /// omega paired with a grade-(n+1) multivector.
    double omega_pair(const MultiVector& z) const;

    /// J applied to a grade-n multivector.
    Eigen::VectorXd apply_j(const MultiVector& zeta) const;
    /// K applied to a vector, as a grade-n multivector.
    MultiVector apply_k(const Eigen::VectorXd& v) const;

    /// J as a dim x C(dim,n) matrix over the lex subset basis.
    const Eigen::MatrixXd& j_table() const { return j_; }
    /// K as a C(dim,n) x dim matrix.
    const Eigen::MatrixXd& k_table() const { return k_; }

private:
    Triad() = default;
    TriadFamily family_{};
    int dim_ = 0, n_ = 0;
    double lambda_ = 0.0;
    Eigen::VectorXd omega_;
    std::vector<std::pair<int, double>> omega_nz_;
    Eigen::MatrixXd j_, k_;
};

/// Residuals of the compatibility axioms over seeded random samples.
struct CompatibilityReport {
    double res_vcp_form = 0.0;    // (a) omega(zeta,B) - g(J zeta, B)
    double res_k_adjoint = 0.0;   // (b) <zeta, K A> - omega(A, zeta)
    double res_split = 0.0;       // (c) J o K - (-1)^n lambda I
    double res_comass = 0.0;      // (d) |J(v1^...^vn)| - |v1^...^vn| on unit decomposables
    double res_metric = 0.0;      // (e) g(A,B) - lambda^{-1} (-1)^n omega(K A, B)
    double nondeg_margin = 0.0;   // (f) smallest singular value of V -> iota_V omega
    int samples = 0;
    double tol = 0.0;
    bool pass = false;
    KvReport to_report() const;
};

CompatibilityReport check_compatibility(const Triad& t, int samples, double tol,
                                        uint64_t seed);

/// Sampled comass of omega over random orthonormal (n+1)-frames plus the
/// equality cases on frames closed up by J.
struct ComassReport {
    double max_frame_value = 0.0;      // sup of |omega| over sampled frames
    double calibrated_value_err = 0.0; // max |omega(frame) - 1| on J-closed frames
    double calibrated_vector_err = 0.0;// max |zeta0 - J(zeta1^...^zetan)| on those frames
    double detuned_max = 0.0;          // max omega after rotating zeta0 away
    int frames = 0;
    bool pass = false;
    KvReport to_report() const;
};

ComassReport calibration_comass_check(const Triad& t, int frames, uint64_t seed);

} // namespace mhf
