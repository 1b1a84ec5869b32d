#include "triad.hpp"

#include <cmath>

#include "errors.hpp"
#include "octonion.hpp"
#include "rng.hpp"

namespace mhf {

const char* family_name(TriadFamily f) {
    switch (f) {
        case TriadFamily::hermitian: return "hermitian";
        case TriadFamily::conformal: return "conformal";
        case TriadFamily::associative: return "associative";
        case TriadFamily::cayley: return "cayley";
    }
    return "?";
}

TriadFamily parse_family(const std::string& name) {
    if (name == "hermitian") return TriadFamily::hermitian;
    if (name == "conformal") return TriadFamily::conformal;
    if (name == "associative") return TriadFamily::associative;
    if (name == "cayley") return TriadFamily::cayley;
    throw UnsupportedTriadError("unknown triad family '" + name + "'");
}

namespace {

int tuple_rank(int dim, int k, std::initializer_list<int> idx) {
    uint16_t m = 0;
    for (int i : idx) m |= static_cast<uint16_t>(1u << i);
    return SubsetTable::get(dim, k).rank(m);
}

Eigen::VectorXd omega_hermitian(int d) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(choose(d, 2));
    for (int a = 0; a + 1 < d; a += 2) w[tuple_rank(d, 2, {a, a + 1})] = 1.0;
    return w;
}

Eigen::VectorXd omega_conformal() {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(1);
    w[0] = 1.0;
    return w;
}

// The G2 3-form on R^7 in coordinates (x1,x2,x3,y0,y1,y2,y3):
//   dx123 - dx1(dy23 + dy10) - dx2(dy31 + dy20) - dx3(dy12 + dy30),
// expanded onto sorted index triples. Indices: 0..2 = x1..x3, 3..6 = y0..y3.
Eigen::VectorXd omega_associative() {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(choose(7, 3));
    const auto set = [&](std::initializer_list<int> idx, double v) {
        w[tuple_rank(7, 3, idx)] = v;
    };
    set({0, 1, 2}, 1.0);
    set({0, 5, 6}, -1.0);
    set({0, 3, 4}, 1.0);
    set({1, 4, 6}, 1.0);
    set({1, 3, 5}, 1.0);
    set({2, 4, 5}, -1.0);
    set({2, 3, 6}, 1.0);
    return w;
}

// The Spin7 4-form on R^8 = O: Phi(a,b,c,d) = g(a x b x c, d), evaluated on
// the basis via the octonion triple cross product.
Eigen::VectorXd omega_cayley() {
    const auto& table = SubsetTable::get(8, 4);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(table.count());
    for (int r = 0; r < table.count(); ++r) {
        const auto& idx = table.indices(r);
        const Octonion t = triple_cross(Octonion::unit(idx[0]), Octonion::unit(idx[1]),
                                        Octonion::unit(idx[2]));
        w[r] = t.c[idx[3]];
    }
    return w;
}

} // namespace

Triad Triad::from_omega(TriadFamily family, int dim, int n, Eigen::VectorXd omega) {
    if (dim < 2 || dim > 8 || n < 1 || n >= dim)
        throw UnsupportedTriadError("triad dimensions out of range");
    Triad t;
    t.family_ = family;
    t.dim_ = dim;
    t.n_ = n;
    const auto& tn = SubsetTable::get(dim, n);
    const auto& tnp1 = SubsetTable::get(dim, n + 1);
    if (omega.size() != tnp1.count())
        throw DimensionError("omega coefficient count must be C(dim, n+1)");
    t.omega_ = std::move(omega);

    for (int r = 0; r < tnp1.count(); ++r)
        if (t.omega_[r] != 0.0) t.omega_nz_.emplace_back(r, t.omega_[r]);

    // J(e_S) = sum_b omega(e_S ^ e_b) e_b; K(e_b) = sum_S omega(e_b ^ e_S) e_S.
    t.j_ = Eigen::MatrixXd::Zero(dim, tn.count());
    t.k_ = Eigen::MatrixXd::Zero(tn.count(), dim);
    for (int s = 0; s < tn.count(); ++s) {
        const uint16_t ms = tn.mask(s);
        for (int b = 0; b < dim; ++b) {
            const uint16_t mb = static_cast<uint16_t>(1u << b);
            if (ms & mb) continue;
            const double c = t.omega_[tnp1.rank(ms | mb)];
            if (c == 0.0) continue;
            t.j_(b, s) = merge_sign(ms, mb) * c;
            t.k_(s, b) = merge_sign(mb, ms) * c;
        }
    }

    // best-fit lambda from J o K = (-1)^n lambda I
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    t.lambda_ = sgn * (t.j_ * t.k_).trace() / dim;
    if (t.lambda_ <= 0.0)
        throw UnsupportedTriadError("split product constant is not positive");
    return t;
}

Triad Triad::make(TriadFamily family, int dim) {
    Eigen::VectorXd omega;
    int n = 0;
    switch (family) {
        case TriadFamily::hermitian:
            if (dim < 2 || dim > 8 || dim % 2 != 0)
                throw UnsupportedTriadError("hermitian triad needs even dim in [2,8]");
            n = 1;
            omega = omega_hermitian(dim);
            break;
        case TriadFamily::conformal:
            if (dim < 2 || dim > 8)
                throw UnsupportedTriadError("conformal triad needs dim in [2,8]");
            n = dim - 1;
            omega = omega_conformal();
            break;
        case TriadFamily::associative:
            if (dim != 7) throw UnsupportedTriadError("associative triad needs dim 7");
            n = 2;
            omega = omega_associative();
            break;
        case TriadFamily::cayley:
            if (dim != 8) throw UnsupportedTriadError("cayley triad needs dim 8");
            n = 3;
            omega = omega_cayley();
            break;
    }
    Triad t = from_omega(family, dim, n, std::move(omega));
    // The four families satisfy the split-product axiom exactly; treat any
    // deviation as a construction bug.
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const Eigen::MatrixXd jk = t.j_table() * t.k_table();
    if ((jk - sgn * t.lambda() * Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, t.lambda()))
        throw UnsupportedTriadError("split product is not proportional to the identity");
    return t;
}

std::shared_ptr<const Triad> Triad::make_shared(TriadFamily family, int dim) {
    return std::make_shared<const Triad>(make(family, dim));
}

double Triad::omega_eval(const std::vector<Eigen::VectorXd>& vectors) const {
    if (static_cast<int>(vectors.size()) != n_ + 1)
        throw DimensionError("omega_eval expects n+1 vectors");
    MultiVector w = MultiVector::from_vector(vectors[0]);
    for (size_t t = 1; t < vectors.size(); ++t)
        w = wedge(w, MultiVector::from_vector(vectors[t]));
    return omega_pair(w);
}

double Triad::omega_pair(const MultiVector& z) const {
    if (z.dim() != dim_ || z.grade() != n_ + 1)
        throw DimensionError("omega_pair expects a grade n+1 multivector");
    return omega_.dot(z.coeffs());
}

Eigen::VectorXd Triad::apply_j(const MultiVector& zeta) const {
    if (zeta.dim() != dim_ || zeta.grade() != n_)
        throw DimensionError("apply_j expects a grade-n multivector in the triad dimension");
    return j_ * zeta.coeffs();
}

MultiVector Triad::apply_k(const Eigen::VectorXd& v) const {
    if (v.size() != dim_)
        throw DimensionError("apply_k expects a vector in the triad dimension");
    MultiVector r(dim_, n_);
    r.coeffs() = k_ * v;
    return r;
}

KvReport CompatibilityReport::to_report() const {
    KvReport r;
    r.add("family_samples", samples);
    r.add("res_vcp_form", res_vcp_form);
    r.add("res_k_adjoint", res_k_adjoint);
    r.add("res_split", res_split);
    r.add("res_comass", res_comass);
    r.add("res_metric", res_metric);
    r.add("nondeg_margin", nondeg_margin);
    r.add("tol", tol);
    r.add_bool("pass", pass);
    return r;
}

CompatibilityReport check_compatibility(const Triad& t, int samples, double tol,
                                        uint64_t seed) {
    if (samples < 1) throw InvalidArgument("check_compatibility needs samples >= 1");
    CompatibilityReport rep;
    rep.samples = samples;
    rep.tol = tol;
    Rng rng(seed);
    const int d = t.dim();
    const int n = t.fold();
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;

    // (c) is deterministic: max entry deviation of J K from (-1)^n lambda I.
    rep.res_split = (t.j_table() * t.k_table() -
                     sgn * t.lambda() * Eigen::MatrixXd::Identity(d, d))
                        .cwiseAbs()
                        .maxCoeff();

    // (f) smallest singular value of the contraction V -> iota_V omega,
    // whose matrix over the subset basis is exactly the K table.
    rep.nondeg_margin = t.k_table().jacobiSvd().singularValues().minCoeff();

    const auto& tn = SubsetTable::get(d, n);
    for (int s = 0; s < samples; ++s) {
        // (a) omega(zeta, B) = g(J zeta, B) on a random n-multivector and vector
        MultiVector zeta(d, n);
        zeta.coeffs() = rng.gaussian_vector(tn.count());
        const Eigen::VectorXd b = rng.gaussian_vector(d);
        const double lhs_a = t.omega_pair(wedge(zeta, MultiVector::from_vector(b)));
        const double rhs_a = t.apply_j(zeta).dot(b);
        rep.res_vcp_form = std::max(rep.res_vcp_form, std::abs(lhs_a - rhs_a));

        // (b) <zeta, K A> = omega(A, zeta)
        const Eigen::VectorXd a = rng.gaussian_vector(d);
        const double lhs_b = zeta.coeffs().dot(t.apply_k(a).coeffs());
        const double rhs_b = t.omega_pair(wedge(MultiVector::from_vector(a), zeta));
        rep.res_k_adjoint = std::max(rep.res_k_adjoint, std::abs(lhs_b - rhs_b));

        // (d) comass equality on a random unit decomposable
        Eigen::MatrixXd frame = rng.gaussian_matrix(d, n);
        MultiVector dec = MultiVector::from_vector(frame.col(0));
        for (int c = 1; c < n; ++c) dec = wedge(dec, MultiVector::from_vector(frame.col(c)));
        const double nrm = dec.norm();
        if (nrm > 1e-8) {
            dec = dec * (1.0 / nrm);
            rep.res_comass = std::max(rep.res_comass,
                                      std::abs(t.apply_j(dec).norm() - 1.0));
        }

        // (e) g(A,B) = lambda^{-1} (-1)^n omega(K A ^ B)
        const Eigen::VectorXd b2 = rng.gaussian_vector(d);
        const double lhs_e = a.dot(b2);
        const double rhs_e = sgn / t.lambda() *
                             t.omega_pair(wedge(t.apply_k(a), MultiVector::from_vector(b2)));
        rep.res_metric = std::max(rep.res_metric, std::abs(lhs_e - rhs_e));
    }

    rep.pass = rep.res_vcp_form <= tol && rep.res_k_adjoint <= tol &&
               rep.res_split <= tol && rep.res_comass <= tol &&
               rep.res_metric <= tol && rep.nondeg_margin > 0.0;
    return rep;
}

KvReport ComassReport::to_report() const {
    KvReport r;
    r.add("frames", frames);
    r.add("max_frame_value", max_frame_value);
    r.add("calibrated_value_err", calibrated_value_err);
    r.add("calibrated_vector_err", calibrated_vector_err);
    r.add("detuned_max", detuned_max);
    r.add_bool("pass", pass);
    return r;
}

ComassReport calibration_comass_check(const Triad& t, int frames, uint64_t seed) {
    if (frames < 1) throw InvalidArgument("calibration_comass_check needs frames >= 1");
    ComassReport rep;
    rep.frames = frames;
    Rng rng(seed);
    const int d = t.dim();
    const int n = t.fold();

    std::vector<Eigen::VectorXd> vecs(n + 1);
    for (int s = 0; s < frames; ++s) {
        const Eigen::MatrixXd q = rng.orthonormal_frame(d, n + 1);
        for (int c = 0; c <= n; ++c) vecs[c] = q.col(c);
        rep.max_frame_value = std::max(rep.max_frame_value, std::abs(t.omega_eval(vecs)));
    }

    // Equality cases: draw an orthonormal n-frame (zeta1..zetan) and close it
    // up with zeta0 := J(zeta1 ^ ... ^ zetan) in the final slot, so that
    // omega(zeta1 ^ ... ^ zetan ^ zeta0) = g(J(...), zeta0) = 1 exactly.
    // Conversely, rotating zeta0 away drops the value below 1.
    const int closed = std::min(frames, 256);
    for (int s = 0; s < closed; ++s) {
        const Eigen::MatrixXd q = rng.orthonormal_frame(d, n + 1);
        MultiVector dec = MultiVector::from_vector(q.col(1));
        for (int c = 2; c <= n; ++c) dec = wedge(dec, MultiVector::from_vector(q.col(c)));
        const Eigen::VectorXd zeta0 = t.apply_j(dec);

        for (int c = 1; c <= n; ++c) vecs[c - 1] = q.col(c);
        vecs[n] = zeta0;
        rep.calibrated_value_err =
            std::max(rep.calibrated_value_err, std::abs(t.omega_eval(vecs) - 1.0));

        // The closed-up frame must itself be orthonormal, otherwise the
        // value-1 evaluation would not witness the comass equality case.
        double closure = std::abs(zeta0.norm() - 1.0);
        for (int c = 1; c <= n; ++c)
            closure = std::max(closure, std::abs(zeta0.dot(q.col(c))));
        rep.calibrated_vector_err = std::max(rep.calibrated_vector_err, closure);

        // Mix zeta0 with an orthogonal direction; the value must drop to cos.
        Eigen::VectorXd w = q.col(0) - q.col(0).dot(zeta0) * zeta0;
        for (int c = 1; c <= n; ++c) w -= w.dot(q.col(c)) * q.col(c);
        if (w.norm() > 1e-6) {
            w.normalize();
            const double ang = 0.3;
            vecs[n] = std::cos(ang) * zeta0 + std::sin(ang) * w;
            rep.detuned_max = std::max(rep.detuned_max, std::abs(t.omega_eval(vecs)));
        }
    }

    rep.pass = rep.max_frame_value <= 1.0 + 1e-9 &&
               rep.calibrated_value_err <= 1e-12 &&
               rep.calibrated_vector_err <= 1e-12 &&
               rep.detuned_max <= std::cos(0.3) + 1e-9;
    return rep;
}

} // namespace mhf
