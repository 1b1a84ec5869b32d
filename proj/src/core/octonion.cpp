#include "octonion.hpp"

#include <cmath>

#include "errors.hpp"

namespace mhf {

namespace {

using Quat = std::array<double, 4>; // (1, i, j, k)

Quat qmul(const Quat& a, const Quat& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

Quat qsub(const Quat& a, const Quat& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Quat qadd(const Quat& a, const Quat& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Quat lo(const Octonion& o) { return {o.c[0], o.c[1], o.c[2], o.c[3]}; }
Quat hi(const Octonion& o) { return {o.c[4], o.c[5], o.c[6], o.c[7]}; }

Octonion from_pair(const Quat& a, const Quat& b) {
    return Octonion{{a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]}};
}

} // namespace

double Octonion::norm() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
}

Octonion Octonion::operator+(const Octonion& o) const {
    Octonion r;
    for (int t = 0; t < 8; ++t) r.c[t] = c[t] + o.c[t];
    return r;
}

Octonion Octonion::operator-(const Octonion& o) const {
    Octonion r;
    for (int t = 0; t < 8; ++t) r.c[t] = c[t] - o.c[t];
    return r;
}

Octonion Octonion::operator*(double s) const {
    Octonion r;
    for (int t = 0; t < 8; ++t) r.c[t] = c[t] * s;
    return r;
}

ImOctonion ImOctonion::from_vector(const Eigen::VectorXd& v) {
    if (v.size() != 7) throw DimensionError("imaginary octonion needs 7 coordinates");
    ImOctonion r;
    for (int t = 0; t < 7; ++t) r.c[t] = v[t];
    return r;
}

Eigen::VectorXd ImOctonion::as_vector() const {
    Eigen::VectorXd v(7);
    for (int t = 0; t < 7; ++t) v[t] = c[t];
    return v;
}

double ImOctonion::norm() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
}

double ImOctonion::dot(const ImOctonion& o) const {
    double s = 0.0;
    for (int t = 0; t < 7; ++t) s += c[t] * o.c[t];
    return s;
}

Octonion oct_mul(const Octonion& x, const Octonion& y) {
    const Quat a = lo(x), b = hi(x), c = lo(y), d = hi(y);
    return from_pair(qsub(qmul(a, c), qmul(qconj(d), b)),
                     qadd(qmul(d, a), qmul(b, qconj(c))));
}

Octonion oct_conj(const Octonion& a) {
    Octonion r;
    r.c[0] = a.c[0];
    for (int t = 1; t < 8; ++t) r.c[t] = -a.c[t];
    return r;
}

Octonion embed(const ImOctonion& v) {
    Octonion r;
    for (int t = 0; t < 7; ++t) r.c[t + 1] = v.c[t];
    return r;
}

ImOctonion im_part(const Octonion& a) {
    ImOctonion r;
    for (int t = 0; t < 7; ++t) r.c[t] = a.c[t + 1];
    return r;
}

ImOctonion cross7(const ImOctonion& a, const ImOctonion& b) {
    return im_part(oct_mul(embed(a), embed(b)));
}

Octonion associator(const ImOctonion& x, const ImOctonion& y, const ImOctonion& z) {
    const Octonion ox = embed(x), oy = embed(y), oz = embed(z);
    return oct_mul(oct_mul(ox, oy), oz) - oct_mul(ox, oct_mul(oy, oz));
}

Octonion triple_cross(const Octonion& x, const Octonion& y, const Octonion& z) {
    const Octonion yb = oct_conj(y);
    return (oct_mul(x, oct_mul(yb, z)) - oct_mul(z, oct_mul(yb, x))) * 0.5;
}

FrameTest is_associative_frame(const ImOctonion& f1, const ImOctonion& f2,
                               const ImOctonion& f3, double tol) {
    FrameTest r;
    Eigen::MatrixXd m(7, 3);
    m.col(0) = f1.as_vector();
    m.col(1) = f2.as_vector();
    m.col(2) = f3.as_vector();
    const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
    const double scale = f1.norm() * f2.norm() * f3.norm();
    r.degenerate = (scale == 0.0) || (sv[2] <= 1e-12 * sv[0]);
    r.associator_norm = associator(f1, f2, f3).norm();
    r.associative = r.associator_norm <= tol * (scale > 0.0 ? scale : 1.0);
    return r;
}

} // namespace mhf
