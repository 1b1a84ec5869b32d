#pragma once

#include <initializer_list>
#include <span>

#include <Eigen/Dense>

#include "combinatorics.hpp"

namespace mhf {

/// Grade-k element of Lambda^k R^d, d <= 8.
///
/// Coefficients are indexed by strictly increasing k-index-tuples in
/// lexicographic order (see SubsetTable); all norms are taken in the flat
/// orthonormal metric. Values are immutable in spirit: every operation
/// returns a fresh object.
class MultiVector {
public:
    MultiVector(int dim, int grade);

    static MultiVector zero(int dim, int grade) { return MultiVector(dim, grade); }

    /// Basis k-vector e_{i1} ^ ... ^ e_{ik} for strictly increasing indices.
    static MultiVector basis(int dim, std::initializer_list<int> indices);

    /// Grade-1 vector with the given coefficients.
    static MultiVector from_vector(const Eigen::VectorXd& v);

    int dim() const { return dim_; }
    int grade() const { return grade_; }
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    Eigen::VectorXd& coeffs() { return coeffs_; }

    double norm() const { return coeffs_.norm(); }
    double dot(const MultiVector& other) const;

    /// Coefficient on the basis element with the given sorted index tuple.
    double coeff(std::initializer_list<int> indices) const;

    MultiVector operator+(const MultiVector& o) const;
    MultiVector operator-(const MultiVector& o) const;
    MultiVector operator*(double s) const;

    /// Grade-1 view as a plain vector.
    Eigen::VectorXd as_vector() const;

private:
    int dim_, grade_;
    Eigen::VectorXd coeffs_;
};

/// Exterior product. Bilinear, associative, graded-anticommutative.
MultiVector wedge(const MultiVector& a, const MultiVector& b);

/// Hodge star in the flat metric with the standard orientation:
/// e_S ^ star(e_S) = e_{1...d}.
MultiVector hodge_star(const MultiVector& a);

/// Standard k-th exterior power of a linear map applied to a k-vector:
/// on decomposables, v1^...^vk -> L(v1)^...^L(vk).
MultiVector ext_power_apply(const Eigen::MatrixXd& L, int k, const MultiVector& a);

/// Hilbert-Schmidt (Frobenius) norm of a linear map.
double hs_norm(const Eigen::MatrixXd& L);

} // namespace mhf
