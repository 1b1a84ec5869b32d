#pragma once

// Shared builders for test maps.

#include <cmath>
#include <memory>

#include "core/gmap_io.hpp"
#include "core/gridmap.hpp"
#include "core/jets.hpp"
#include "core/solver.hpp"
#include "core/triad.hpp"

namespace testsupport {

inline constexpr double kTau = 6.283185307179586476925286766559;

/// u(x) = (x1,...,xm, 0,...) into the first m target coordinates.
inline mhf::GridMap inclusion_map(mhf::TriadFamily family, int target_dim, int n) {
    auto triad = mhf::Triad::make_shared(family, target_dim);
    mhf::GridMap m(triad, mhf::GridShape::cube(triad->fold() + 1, n));
    const int dims = m.domain_dim();
    m.fill([&](const double* x, double* out) {
        for (int c = 0; c < m.target_dim(); ++c) out[c] = 0.0;
        for (int a = 0; a < dims; ++a) out[a] = x[a];
    });
    return m;
}

/// Associative-target inclusion of the quaternionic x-coordinates.
inline mhf::GridMap associative_inclusion(int n) {
    return inclusion_map(mhf::TriadFamily::associative, 7, n);
}

/// u(x) = A x with integer A (a torus endomorphism), target = conformal triad.
inline mhf::GridMap linear_endomorphism(const Eigen::Matrix3i& a, int n) {
    auto triad = mhf::Triad::make_shared(mhf::TriadFamily::conformal, 3);
    mhf::GridMap m(triad, mhf::GridShape::cube(3, n));
    m.fill([&](const double* x, double* out) {
        for (int r = 0; r < 3; ++r)
            out[r] = a(r, 0) * x[0] + a(r, 1) * x[1] + a(r, 2) * x[2];
    });
    return m;
}

/// Smooth multi-mode trig perturbation of the associative inclusion; the
/// fixed map used by convergence studies.
inline mhf::GridMap trig_map(int n) {
    auto triad = mhf::Triad::make_shared(mhf::TriadFamily::associative, 7);
    mhf::GridMap m(triad, mhf::GridShape::cube(3, n));
    m.fill([&](const double* x, double* out) {
        const double X = kTau * x[0], Y = kTau * x[1], Z = kTau * x[2];
        out[0] = x[0] + 0.05 * std::sin(Y) + 0.02 * std::cos(Y + Z);
        out[1] = x[1] + 0.04 * std::sin(Z);
        out[2] = x[2] + 0.03 * std::cos(X) + 0.01 * std::sin(X + Y);
        out[3] = 0.05 * std::cos(X) + 0.03 * std::sin(Y);
        out[4] = 0.04 * std::sin(X + Z);
        out[5] = 0.02 * std::cos(Y);
        out[6] = 0.03 * std::sin(X + Y + Z);
    });
    return m;
}

/// Inclusion with one perturbed target coordinate (the flow benchmark).
inline mhf::GridMap perturbed_inclusion(int n, double amplitude) {
    mhf::GridMap m = associative_inclusion(n);
    m.fill([&](const double* x, double* out) {
        out[0] = x[0];
        out[1] = x[1];
        out[2] = x[2];
        out[3] = amplitude * std::sin(kTau * x[0]);
        out[4] = out[5] = out[6] = 0.0;
    });
    return m;
}

} // namespace testsupport
