#pragma once

#include <array>

#include <Eigen/Dense>

namespace mhf {

/// Octonion in the Cayley-Dickson basis (1, i, j, k, l, il, jl, kl):
/// a pair of quaternions (first four, last four coordinates).
struct Octonion {
    std::array<double, 8> c{};

    static Octonion unit(int axis) {
        Octonion o;
        o.c[axis] = 1.0;
        return o;
    }
    static Octonion real(double x) {
        Octonion o;
        o.c[0] = x;
        return o;
    }

    double norm() const;
    double re() const { return c[0]; }

    Octonion operator+(const Octonion& o) const;
    Octonion operator-(const Octonion& o) const;
    Octonion operator*(double s) const;
};

/// Element of Im O = R^7, basis (i, j, k, l, il, jl, kl).
struct ImOctonion {
    std::array<double, 7> c{};

    static ImOctonion unit(int axis) {
        ImOctonion v;
        v.c[axis] = 1.0;
        return v;
    }
    static ImOctonion from_vector(const Eigen::VectorXd& v);

    Eigen::VectorXd as_vector() const;
    double norm() const;
    double dot(const ImOctonion& o) const;
};

/// Cayley-Dickson product (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
Octonion oct_mul(const Octonion& a, const Octonion& b);

Octonion oct_conj(const Octonion& a);

/// Embed an imaginary octonion with zero real part.
Octonion embed(const ImOctonion& v);

/// Imaginary part as an element of R^7.
ImOctonion im_part(const Octonion& a);

/// 7-dimensional cross product: Im(a b).
ImOctonion cross7(const ImOctonion& a, const ImOctonion& b);

/// Associator (x y) z - x (y z); lands in Im O for imaginary arguments but
/// is returned whole so convention slips surface as a nonzero real part.
Octonion associator(const ImOctonion& x, const ImOctonion& y, const ImOctonion& z);

/// Triple cross product (x (conj(y) z) - z (conj(y) x)) / 2.
Octonion triple_cross(const Octonion& x, const Octonion& y, const Octonion& z);

struct FrameTest {
    bool associative = false;
    /// Set when the frame is numerically linearly dependent; the associative
    /// verdict is then unreliable.
    bool degenerate = false;
    double associator_norm = 0.0;
};

/// Tests whether span(f1,f2,f3) is an associative 3-plane:
/// |[f1,f2,f3]| <= tol |f1||f2||f3|.
FrameTest is_associative_frame(const ImOctonion& f1, const ImOctonion& f2,
                               const ImOctonion& f3, double tol = 1e-9);

} // namespace mhf
