#include "multivector.hpp"

#include <algorithm>
#include <bit>

#include "errors.hpp"

namespace mhf {

namespace {

void check_dim_grade(int dim, int grade) {
    if (dim < 1 || dim > 8)
        throw DimensionError("multivector dimension must be in [1,8], got " + std::to_string(dim));
    if (grade < 0 || grade > dim)
        throw GradeError("grade must be in [0,dim], got " + std::to_string(grade));
}

/// Determinant of the square submatrix L(rows, cols), sizes 0..4.
double minor_det(const Eigen::MatrixXd& L, std::span<const int8_t> rows,
                 std::span<const int8_t> cols, int k) {
    switch (k) {
        case 0:
            return 1.0;
        case 1:
            return L(rows[0], cols[0]);
        case 2:
            return L(rows[0], cols[0]) * L(rows[1], cols[1]) -
                   L(rows[0], cols[1]) * L(rows[1], cols[0]);
        case 3: {
            const double a = L(rows[0], cols[0]), b = L(rows[0], cols[1]), c = L(rows[0], cols[2]);
            const double d = L(rows[1], cols[0]), e = L(rows[1], cols[1]), f = L(rows[1], cols[2]);
            const double g = L(rows[2], cols[0]), h = L(rows[2], cols[1]), i = L(rows[2], cols[2]);
            return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
        }
        default: {
            Eigen::Matrix4d m;
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) m(r, c) = L(rows[r], cols[c]);
            return m.determinant();
        }
    }
}

} // namespace

MultiVector::MultiVector(int dim, int grade) : dim_(dim), grade_(grade) {
    check_dim_grade(dim, grade);
    coeffs_ = Eigen::VectorXd::Zero(choose(dim, grade));
}

MultiVector MultiVector::basis(int dim, std::initializer_list<int> indices) {
    MultiVector m(dim, static_cast<int>(indices.size()));
    uint16_t mask = 0;
    int prev = -1;
    for (int i : indices) {
        if (i <= prev || i >= dim)
            throw InvalidArgument("basis indices must be strictly increasing and < dim");
        mask |= static_cast<uint16_t>(1u << i);
        prev = i;
    }
    m.coeffs_[SubsetTable::get(dim, m.grade_).rank(mask)] = 1.0;
    return m;
}

MultiVector MultiVector::from_vector(const Eigen::VectorXd& v) {
    MultiVector m(static_cast<int>(v.size()), 1);
    m.coeffs_ = v;
    return m;
}

double MultiVector::dot(const MultiVector& other) const {
    if (dim_ != other.dim_ || grade_ != other.grade_)
        throw DimensionError("dot of multivectors with mismatched dim/grade");
    return coeffs_.dot(other.coeffs_);
}

double MultiVector::coeff(std::initializer_list<int> indices) const {
    if (static_cast<int>(indices.size()) != grade_)
        throw GradeError("coefficient tuple length must equal grade");
    uint16_t mask = 0;
    for (int i : indices) mask |= static_cast<uint16_t>(1u << i);
    return coeffs_[SubsetTable::get(dim_, grade_).rank(mask)];
}

MultiVector MultiVector::operator+(const MultiVector& o) const {
    if (dim_ != o.dim_ || grade_ != o.grade_)
        throw DimensionError("sum of multivectors with mismatched dim/grade");
    MultiVector r(dim_, grade_);
    r.coeffs_ = coeffs_ + o.coeffs_;
    return r;
}

MultiVector MultiVector::operator-(const MultiVector& o) const {
    if (dim_ != o.dim_ || grade_ != o.grade_)
        throw DimensionError("difference of multivectors with mismatched dim/grade");
    MultiVector r(dim_, grade_);
    r.coeffs_ = coeffs_ - o.coeffs_;
    return r;
}

MultiVector MultiVector::operator*(double s) const {
    MultiVector r(dim_, grade_);
    r.coeffs_ = coeffs_ * s;
    return r;
}

Eigen::VectorXd MultiVector::as_vector() const {
    if (grade_ != 1) throw GradeError("as_vector requires grade 1");
    return coeffs_;
}

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
    if (a.dim() != b.dim())
        throw DimensionError("wedge of multivectors in different dimensions");
    const int dim = a.dim();
    const int grade = a.grade() + b.grade();
    if (grade > dim)
        throw GradeError("wedge grade exceeds ambient dimension");
    const auto& ta = SubsetTable::get(dim, a.grade());
    const auto& tb = SubsetTable::get(dim, b.grade());
    const auto& tr = SubsetTable::get(dim, grade);
    MultiVector r(dim, grade);
    for (int ia = 0; ia < ta.count(); ++ia) {
        const double ca = a.coeffs()[ia];
        if (ca == 0.0) continue;
        const uint16_t ma = ta.mask(ia);
        for (int ib = 0; ib < tb.count(); ++ib) {
            const double cb = b.coeffs()[ib];
            if (cb == 0.0) continue;
            const uint16_t mb = tb.mask(ib);
            if (ma & mb) continue;
            r.coeffs()[tr.rank(ma | mb)] += merge_sign(ma, mb) * ca * cb;
        }
    }
    return r;
}

MultiVector hodge_star(const MultiVector& a) {
    const int dim = a.dim();
    const int k = a.grade();
    const auto& ta = SubsetTable::get(dim, k);
    const auto& tr = SubsetTable::get(dim, dim - k);
    const uint16_t full = static_cast<uint16_t>((1u << dim) - 1);
    MultiVector r(dim, dim - k);
    for (int ia = 0; ia < ta.count(); ++ia) {
        const double c = a.coeffs()[ia];
        if (c == 0.0) continue;
        const uint16_t m = ta.mask(ia);
        const uint16_t comp = full & static_cast<uint16_t>(~m);
        r.coeffs()[tr.rank(comp)] += merge_sign(m, comp) * c;
    }
    return r;
}

MultiVector ext_power_apply(const Eigen::MatrixXd& L, int k, const MultiVector& a) {
    if (a.grade() != k)
        throw GradeError("exterior power grade mismatch");
    if (a.dim() != L.cols())
        throw DimensionError("multivector dimension does not match map source");
    if (k > std::min(L.rows(), L.cols()))
        throw DimensionError("exterior power grade exceeds map rank bound");
    const int td = static_cast<int>(L.rows());
    const auto& ts = SubsetTable::get(a.dim(), k);
    const auto& tt = SubsetTable::get(td, k);
    MultiVector r(td, k);
    for (int is = 0; is < ts.count(); ++is) {
        const double c = a.coeffs()[is];
        if (c == 0.0) continue;
        const auto& cols = ts.indices(is);
        for (int it = 0; it < tt.count(); ++it) {
            const auto& rows = tt.indices(it);
            r.coeffs()[it] += c * minor_det(L, {rows.data(), size_t(k)}, {cols.data(), size_t(k)}, k);
        }
    }
    return r;
}

double hs_norm(const Eigen::MatrixXd& L) { return L.norm(); }

} // namespace mhf
