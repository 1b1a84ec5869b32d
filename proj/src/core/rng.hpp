#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mhf {

/// Seedable random source used by all sampled checks.
///
/// Built on std::mt19937_64 (whose output sequence is pinned by the C++
/// standard) with hand-rolled uniform and Box-Muller transforms, so reports
/// driven by a seed reproduce byte-for-byte across platforms. The library
/// never uses std::*_distribution, whose streams are implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; one spare value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Eigen::VectorXd gaussian_vector(int n) {
        Eigen::VectorXd v(n);
        for (int t = 0; t < n; ++t) v[t] = gaussian();
        return v;
    }

    Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) m(r, c) = gaussian();
        return m;
    }

    /// Random orthonormal k-frame in R^d (columns), via QR of a Gaussian
    /// matrix with the R-diagonal sign fixed.
    Eigen::MatrixXd orthonormal_frame(int d, int k) {
        Eigen::MatrixXd a = gaussian_matrix(d, k);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
        Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        for (int c = 0; c < k; ++c)
            if (r(c, c) < 0) q.col(c) = -q.col(c);
        return q;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace mhf
