#include "jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "reduce.hpp"

namespace mhf {

namespace {

template <class M>
double small_minor(const M& mat, const int8_t* rows, const int* cols, int k) {
    switch (k) {
        case 1:
            return mat(rows[0], cols[0]);
        case 2:
            return mat(rows[0], cols[0]) * mat(rows[1], cols[1]) -
                   mat(rows[0], cols[1]) * mat(rows[1], cols[0]);
        case 3: {
            const double a = mat(rows[0], cols[0]), b = mat(rows[0], cols[1]),
                         c = mat(rows[0], cols[2]);
            const double d = mat(rows[1], cols[0]), e = mat(rows[1], cols[1]),
                         f = mat(rows[1], cols[2]);
            const double g = mat(rows[2], cols[0]), h = mat(rows[2], cols[1]),
                         i = mat(rows[2], cols[2]);
            return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
        }
        default: {
            Eigen::Matrix4d sq;
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) sq(r, c) = mat(rows[r], cols[c]);
            return sq.determinant();
        }
    }
}

double pow_int(double x, int e) {
    double r = 1.0;
    for (int t = 0; t < e; ++t) r *= x;
    return r;
}

/// Differential column along one axis at a node, second order.
template <class Lift>
void diff_column(const GridIndexer& ix, const GridShape& shape, Lift&& lift, int d,
                 int64_t node, int axis, double* out) {
    const double h = shape.spacing(axis);
    int coords[4];
    ix.decode(node, coords);
    const int i = coords[axis];
    const int n = shape.extent[axis];
    if (shape.periodic[axis] || (i > 0 && i < n - 1)) {
        const int64_t up = ix.shift(node, axis, 1);
        const int64_t dn = ix.shift(node, axis, -1);
        for (int c = 0; c < d; ++c)
            out[c] = (unwrap_delta(lift(up, c) - lift(node, c)) +
                      unwrap_delta(lift(node, c) - lift(dn, c))) /
                     (2.0 * h);
    } else if (i == 0) {
        const int64_t p1 = ix.shift(node, axis, 1);
        const int64_t p2 = ix.shift(node, axis, 2);
        for (int c = 0; c < d; ++c)
            out[c] = (4.0 * unwrap_delta(lift(p1, c) - lift(node, c)) -
                      unwrap_delta(lift(p2, c) - lift(node, c))) /
                     (2.0 * h);
    } else {
        const int64_t m1 = ix.shift(node, axis, -1);
        const int64_t m2 = ix.shift(node, axis, -2);
        for (int c = 0; c < d; ++c)
            out[c] = (4.0 * unwrap_delta(lift(node, c) - lift(m1, c)) -
                      unwrap_delta(lift(node, c) - lift(m2, c))) /
                     (2.0 * h);
    }
}

struct MapLift {
    const GridMap& m;
    double operator()(int64_t node, int c) const { return m.lift(node, c); }
};

/// Axis-complement data of the domain star: star(e_a) = (-1)^a e_{comp(a)}.
struct DomainStar {
    int m;
    std::array<std::array<int, 3>, 4> comp{};
    explicit DomainStar(int dims) : m(dims) {
        for (int a = 0; a < m; ++a) {
            int t = 0;
            for (int b = 0; b < m; ++b)
                if (b != a) comp[a][t++] = b;
        }
    }
};

/// Shared pointwise evaluation used by the jet sweep and the cell sweep.
struct PointwiseCtx {
    const Triad& t;
    int d, m, n;
    const SubsetTable& tn;
    double c1;

    explicit PointwiseCtx(const Triad& triad)
        : t(triad),
          d(triad.dim()),
          m(triad.fold() + 1),
          n(triad.fold()),
          tn(SubsetTable::get(triad.dim(), triad.fold())),
          c1(mcr_leading_const(triad.fold())) {}

    /// mcr residual plus |Lambda^n du|^2, sharing the minor sweep.
    SmallMat residual(const SmallMat& du, double* lambda_sq_out) const {
        const DomainStar star(m);
        const double nrm = du.norm();
        SmallMat out = (c1 * pow_int(nrm, n - 1)) * du;
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 70, 1> w(tn.count());
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1> jv(d);
        double lsq = 0.0;
        const double sn = (n % 2 == 0) ? 1.0 : -1.0;
        for (int a = 0; a < m; ++a) {
            for (int r = 0; r < tn.count(); ++r)
                w[r] = small_minor(du, tn.indices(r).data(), star.comp[a].data(), n);
            lsq += w.squaredNorm();
            const double s = sn * ((a % 2 == 0) ? 1.0 : -1.0);
            jv.noalias() = t.j_table() * w;
            out.col(a) -= s * jv;
        }
        if (lambda_sq_out) *lambda_sq_out = lsq;
        return out;
    }

    double pullback(const SmallMat& du) const {
        const auto& tnp1 = SubsetTable::get(d, n + 1);
        int cols[4];
        for (int a = 0; a < m; ++a) cols[a] = a;
        double s = 0.0;
        for (const auto& [rank, coeff] : t.omega_sparse())
            s += coeff * small_minor(du, tnp1.indices(rank).data(), cols, m);
        return s;
    }
};

/// Cell-centered jets: forward differences averaged over the 2^{m-1}
/// parallel edges of each cell, second-order at the cell midpoint.
SmallMat cell_jacobian(const GridMap& m, const PointwiseCtx& ctx, int64_t cell) {
    const GridIndexer& ix = m.indexer();
    const int d = ctx.d;
    const int dims = ctx.m;
    SmallMat du(d, dims);
    const int corners = 1 << (dims - 1);
    for (int a = 0; a < dims; ++a) {
        const double h = m.shape().spacing(a);
        int others[3];
        int t = 0;
        for (int b = 0; b < dims; ++b)
            if (b != a) others[t++] = b;
        for (int c = 0; c < d; ++c) du(c, a) = 0.0;
        for (int s = 0; s < corners; ++s) {
            int64_t base = cell;
            for (int b = 0; b < dims - 1; ++b)
                if (s & (1 << b)) base = ix.shift(base, others[b], 1);
            const int64_t tip = ix.shift(base, a, 1);
            for (int c = 0; c < d; ++c)
                du(c, a) += unwrap_delta(m.lift(tip, c) - m.lift(base, c)) / h;
        }
        for (int c = 0; c < d; ++c) du(c, a) /= corners;
    }
    return du;
}

} // namespace

SmallMat finite_diff_jacobian(const GridMap& m, int64_t node) {
    if (node < 0 || node >= m.nodes()) throw InvalidArgument("node index out of range");
    const int d = m.target_dim();
    const int dims = m.domain_dim();
    SmallMat du(d, dims);
    double col[8];
    for (int a = 0; a < dims; ++a) {
        diff_column(m.indexer(), m.shape(), MapLift{m}, d, node, a, col);
        for (int c = 0; c < d; ++c) du(c, a) = col[c];
    }
    return du;
}

SmallMat mcr_residual(const Triad& t, const SmallMat& du) {
    if (du.rows() != t.dim() || du.cols() != t.fold() + 1)
        throw DimensionError("mcr residual expects a target_dim x (n+1) differential");
    PointwiseCtx ctx(t);
    return ctx.residual(du, nullptr);
}

double pullback_density(const Triad& t, const SmallMat& du) {
    if (du.rows() != t.dim() || du.cols() != t.fold() + 1)
        throw DimensionError("pullback density expects a target_dim x (n+1) differential");
    PointwiseCtx ctx(t);
    return ctx.pullback(du);
}

double lambda_power_norm_sq(const SmallMat& du, int n) {
    const int m = static_cast<int>(du.cols());
    if (n != m - 1) throw GradeError("lambda_power_norm_sq expects n = cols - 1");
    const DomainStar star(m);
    const auto& tn = SubsetTable::get(static_cast<int>(du.rows()), n);
    double lsq = 0.0;
    for (int a = 0; a < m; ++a)
        for (int r = 0; r < tn.count(); ++r) {
            const double v = small_minor(du, tn.indices(r).data(), star.comp[a].data(), n);
            lsq += v * v;
        }
    return lsq;
}

SmallMat JetField::du_at(int64_t node) const {
    SmallMat r(d, m);
    const double* p = du.data() + node * d * m;
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < d; ++c) r(c, a) = p[a * d + c];
    return r;
}

SmallMat JetField::mcr_at(int64_t node) const {
    SmallMat r(d, m);
    const double* p = mcr.data() + node * d * m;
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < d; ++c) r(c, a) = p[a * d + c];
    return r;
}

JetField compute_jets(const GridMap& m) {
    JetField f;
    f.count = m.nodes();
    f.d = m.target_dim();
    f.m = m.domain_dim();
    f.n = f.m - 1;
    const int dn = f.d * f.m;
    f.du.resize(f.count * dn);
    f.mcr.resize(f.count * dn);
    f.du_norm.resize(f.count);
    f.lambda_wc.resize(f.count);
    f.e_np1.resize(f.count);
    f.e_mix.resize(f.count);
    f.pullback.resize(f.count);
    f.gap_density.resize(f.count);
    f.mcr_norm.resize(f.count);

    PointwiseCtx ctx(m.triad());
    const double ce = energy_density_const(f.n);
    const double cq = mix_quotient_const(f.n);
    const double cg = gap_const(f.n);

    double max_norm = 0.0;
    for (int64_t node = 0; node < f.count; ++node) {
        const SmallMat du = finite_diff_jacobian(m, node);
        double* p = f.du.data() + node * dn;
        for (int a = 0; a < f.m; ++a)
            for (int c = 0; c < f.d; ++c) p[a * f.d + c] = du(c, a);
        const double nrm = du.norm();
        f.du_norm[node] = nrm;
        max_norm = std::max(max_norm, nrm);
    }
    f.eps_crit = 1e-8 * max_norm;

    for (int64_t node = 0; node < f.count; ++node) {
        const SmallMat du = f.du_at(node);
        const double nrm = f.du_norm[node];
        double lsq = 0.0;
        const SmallMat r = ctx.residual(du, &lsq);
        double* p = f.mcr.data() + node * dn;
        for (int a = 0; a < f.m; ++a)
            for (int c = 0; c < f.d; ++c) p[a * f.d + c] = r(c, a);
        f.mcr_norm[node] = r.norm();
        f.lambda_wc[node] = nrm * nrm / (f.n + 1.0);
        f.e_np1[node] = ce * pow_int(nrm, f.n + 1);
        const double quot =
            (nrm > f.eps_crit) ? cq * lsq / pow_int(nrm, f.n - 1) : 0.0;
        f.e_mix[node] = 0.5 * f.e_np1[node] + quot;
        f.pullback[node] = ctx.pullback(du);
        f.gap_density[node] = cg * (du.array() * r.array()).sum();
    }
    return f;
}

namespace {

/// Eigenvalues of du^T du, ascending (m x m symmetric).
Eigen::Vector4d gram_eigs(const SmallMat& du, int m) {
    Eigen::MatrixXd g = du.transpose() * du;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    Eigen::Vector4d out = Eigen::Vector4d::Zero();
    for (int t = 0; t < m; ++t) out[t] = std::max(0.0, es.eigenvalues()[t]);
    return out;
}

struct CellIntegrals {
    double pullback = 0.0;
    double gap = 0.0;
    double mix_gap = 0.0;
};

CellIntegrals cell_integrals(const GridMap& m, const JetField& f) {
    PointwiseCtx ctx(m.triad());
    const double cq = mix_quotient_const(f.n);
    const double cg = gap_const(f.n);
    CellIntegrals out;
    std::vector<double> pv(f.count), gv(f.count), qv(f.count);
    if (m.shape().fully_periodic()) {
        for (int64_t cell = 0; cell < f.count; ++cell) {
            const SmallMat du = cell_jacobian(m, ctx, cell);
            double lsq = 0.0;
            const SmallMat r = ctx.residual(du, &lsq);
            const double nrm = du.norm();
            pv[cell] = ctx.pullback(du);
            gv[cell] = cg * (du.array() * r.array()).sum();
            qv[cell] = (nrm > f.eps_crit)
                           ? cq * r.squaredNorm() / pow_int(nrm, f.n - 1)
                           : 0.0;
        }
    } else {
        // Without full periodicity the cell complex does not tile the box;
        // fall back to the nodal quadrature for the integral terms.
        for (int64_t node = 0; node < f.count; ++node) {
            pv[node] = f.pullback[node];
            gv[node] = f.gap_density[node];
            const double nrm = f.du_norm[node];
            qv[node] = (nrm > f.eps_crit)
                           ? cq * f.mcr_norm[node] * f.mcr_norm[node] /
                                 pow_int(nrm, f.n - 1)
                           : 0.0;
        }
    }
    const double vol = 1.0 / static_cast<double>(f.count);
    out.pullback = pairwise_sum(pv) * vol;
    out.gap = pairwise_sum(gv) * vol;
    out.mix_gap = pairwise_sum(qv) * vol;
    return out;
}

DistortionRecord distortion_from_jets(const JetField& f, bool endo) {
    DistortionRecord rec;
    rec.endo = endo;
    const double ce = energy_density_const(f.n);
    double q = 0.0;
    for (int64_t node = 0; node < f.count; ++node) {
        const SmallMat du = f.du_at(node);
        const Eigen::Vector4d eig = gram_eigs(du, f.m);
        const double smin = std::sqrt(eig[0]);
        const double smax = std::sqrt(eig[f.m - 1]);
        double jac;
        if (endo) {
            Eigen::MatrixXd sq = du.topRows(f.m);
            jac = sq.determinant();
            double cr = 0.0;
            const double scale = std::pow(std::abs(jac), 2.0 / f.m);
            for (int t = 0; t < f.m; ++t)
                cr = std::max(cr, std::abs(eig[t] - scale));
            rec.cr_residual = std::max(rec.cr_residual, cr);
        } else {
            double prod = 1.0;
            for (int t = 0; t < f.m; ++t) prod *= eig[t];
            jac = std::sqrt(prod);
        }
        if (smin > f.eps_crit) {
            ++rec.regular_nodes;
            rec.distortion_max = std::max(rec.distortion_max, smax / smin);
            const double e = ce * pow_int(f.du_norm[node], f.n + 1);
            if (jac > e * 1e-14)
                q = std::max(q, e / jac);
            else
                q = std::numeric_limits<double>::infinity();
        }
    }
    if (rec.regular_nodes == 0)
        throw DistortionUndefined("all nodes are critical; distortion is undefined");
    rec.quasiregular_q = q;
    rec.outer_dilation = q;
    return rec;
}

} // namespace

KvReport DiagnosticsReport::to_report() const {
    KvReport r;
    r.add("energy_np1", energy_np1);
    r.add("energy_mix", energy_mix);
    r.add("pullback_integral", pullback_integral);
    r.add("identity_gap", identity_gap);
    r.add("mix_gap", mix_gap);
    r.add("max_mcr_residual", max_mcr_residual);
    r.add("max_weak_conformal_residual", max_weak_conformal_residual);
    r.add("distortion_max", distortion.distortion_max);
    r.add("outer_dilation", distortion.outer_dilation);
    r.add("quasiregular_Q", distortion.quasiregular_q);
    if (distortion.endo) r.add("cr_residual", distortion.cr_residual);
    r.add("critical_tol", critical_tol);
    r.add("critical_node_count", static_cast<long long>(critical_nodes.size()));
    r.add("critical_fraction",
          node_count ? static_cast<double>(critical_nodes.size()) / node_count : 0.0);
    std::string list;
    for (size_t t = 0; t < critical_nodes.size(); ++t) {
        if (t) list += ',';
        list += std::to_string(critical_nodes[t]);
    }
    r.add("critical_nodes", list);
    return r;
}

DiagnosticsReport energy_report(const GridMap& m) {
    const JetField f = compute_jets(m);
    DiagnosticsReport rep;
    rep.node_count = f.count;
    const double vol = 1.0 / static_cast<double>(f.count);
    rep.energy_np1 = pairwise_sum(f.e_np1) * vol;
    rep.energy_mix = pairwise_sum(f.e_mix) * vol;
    const CellIntegrals ci = cell_integrals(m, f);
    rep.pullback_integral = ci.pullback;
    rep.identity_gap = ci.gap;
    rep.mix_gap = ci.mix_gap;
    rep.max_mcr_residual = *std::max_element(f.mcr_norm.begin(), f.mcr_norm.end());

    double wc = 0.0;
    for (int64_t node = 0; node < f.count; ++node) {
        const SmallMat du = f.du_at(node);
        const Eigen::Vector4d eig = gram_eigs(du, f.m);
        const double lam = f.lambda_wc[node];
        for (int t = 0; t < f.m; ++t) wc = std::max(wc, std::abs(eig[t] - lam));
    }
    rep.max_weak_conformal_residual = wc;

    try {
        rep.distortion = distortion_from_jets(f, m.target_dim() == m.domain_dim());
    } catch (const DistortionUndefined&) {
        rep.distortion.endo = m.target_dim() == m.domain_dim();
        rep.distortion.distortion_max = std::numeric_limits<double>::quiet_NaN();
        rep.distortion.quasiregular_q = std::numeric_limits<double>::quiet_NaN();
        rep.distortion.outer_dilation = std::numeric_limits<double>::quiet_NaN();
    }

    rep.critical_tol = f.eps_crit;
    // <= so the all-critical (eps_crit = 0) case of a constant map is flagged
    for (int64_t node = 0; node < f.count; ++node)
        if (f.du_norm[node] <= f.eps_crit) rep.critical_nodes.push_back(node);
    return rep;
}

double weak_conformal_check(const GridMap& m) {
    const int dims = m.domain_dim();
    double wc = 0.0;
    for (int64_t node = 0; node < m.nodes(); ++node) {
        const SmallMat du = finite_diff_jacobian(m, node);
        const Eigen::Vector4d eig = gram_eigs(du, dims);
        const double lam = du.squaredNorm() / dims;
        for (int t = 0; t < dims; ++t) wc = std::max(wc, std::abs(eig[t] - lam));
    }
    return wc;
}

DistortionRecord distortion_report(const GridMap& m, bool endo) {
    if (endo && m.target_dim() != m.domain_dim())
        throw DimensionError("endomorphism diagnostics need target_dim == domain_dim");
    const JetField f = compute_jets(m);
    return distortion_from_jets(f, endo);
}

std::vector<int64_t> critical_locus(const GridMap& m, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("critical_locus needs tol > 0");
    std::vector<int64_t> out;
    for (int64_t node = 0; node < m.nodes(); ++node)
        if (finite_diff_jacobian(m, node).norm() < tol) out.push_back(node);
    return out;
}

std::vector<double> p_laplacian(const GridMap& m, double p) {
    if (!(p > 1.0)) throw InvalidExponent("p-laplacian needs p > 1");
    const int d = m.target_dim();
    const int dims = m.domain_dim();
    const int64_t count = m.nodes();
    // flux = |du|^{p-2} du, stored like JetField::du
    std::vector<double> flux(count * d * dims);
    for (int64_t node = 0; node < count; ++node) {
        const SmallMat du = finite_diff_jacobian(m, node);
        const double nrm = du.norm();
        const double w = (nrm > 0.0) ? std::pow(nrm, p - 2.0) : 0.0;
        double* f = flux.data() + node * d * dims;
        for (int a = 0; a < dims; ++a)
            for (int c = 0; c < d; ++c) f[a * d + c] = w * du(c, a);
    }
    std::vector<double> div(count * d, 0.0);
    const GridIndexer& ix = m.indexer();
    auto col = [&](int64_t node, int axis, int c) {
        return flux[node * d * dims + axis * d + c];
    };
    int coords[4];
    for (int64_t node = 0; node < count; ++node) {
        ix.decode(node, coords);
        for (int a = 0; a < dims; ++a) {
            const double h = m.shape().spacing(a);
            const int i = coords[a];
            const int n = m.shape().extent[a];
            for (int c = 0; c < d; ++c) {
                double v;
                if (m.shape().periodic[a] || (i > 0 && i < n - 1)) {
                    v = (col(ix.shift(node, a, 1), a, c) -
                         col(ix.shift(node, a, -1), a, c)) /
                        (2.0 * h);
                } else if (i == 0) {
                    v = (-3.0 * col(node, a, c) + 4.0 * col(ix.shift(node, a, 1), a, c) -
                         col(ix.shift(node, a, 2), a, c)) /
                        (2.0 * h);
                } else {
                    v = (3.0 * col(node, a, c) - 4.0 * col(ix.shift(node, a, -1), a, c) +
                         col(ix.shift(node, a, -2), a, c)) /
                        (2.0 * h);
                }
                div[node * d + c] += v;
            }
        }
    }
    return div;
}

LatticeSimilarity LatticeSimilarity::translation(const std::array<int, 4>& shift) {
    LatticeSimilarity s;
    s.shift = shift;
    return s;
}

namespace {

void validate_similarity(const GridMap& m, const LatticeSimilarity& phi) {
    const int dims = m.domain_dim();
    if (!m.shape().fully_periodic())
        throw LatticeMismatchError("similarity maps need a fully periodic domain");
    if (phi.scale < 1)
        throw LatticeMismatchError("similarity scale must be a positive integer");
    bool trivial_perm = true;
    std::array<bool, 4> seen{};
    int perm_sign = 1;
    for (int a = 0; a < dims; ++a) {
        const int p = phi.perm[a];
        if (p < 0 || p >= dims || seen[p])
            throw LatticeMismatchError("similarity permutation is not a permutation");
        seen[p] = true;
        if (p != a) trivial_perm = false;
        if (phi.sign[a] != 1 && phi.sign[a] != -1)
            throw LatticeMismatchError("similarity signs must be +-1");
    }
    // parity of the permutation
    {
        std::array<int, 4> pp = phi.perm;
        for (int a = 0; a < dims; ++a)
            while (pp[a] != a) {
                std::swap(pp[a], pp[pp[a]]);
                perm_sign = -perm_sign;
            }
    }
    int det = perm_sign;
    for (int a = 0; a < dims; ++a) det *= phi.sign[a];
    if (det != 1)
        throw InvalidArgument("similarity must preserve orientation");
    if (!trivial_perm || phi.scale != 1) {
        for (int a = 1; a < dims; ++a)
            if (m.shape().extent[a] != m.shape().extent[0])
                throw LatticeMismatchError(
                    "permutations and scalings need equal extents on all axes");
    }
}

} // namespace

GridMap compose_with_similarity(const GridMap& m, const LatticeSimilarity& phi) {
    validate_similarity(m, phi);
    const int dims = m.domain_dim();
    const int d = m.target_dim();
    GridMap out(m.triad_ptr(), m.shape());
    const GridIndexer& ix = m.indexer();
    int c[4], src[4];
    for (int64_t node = 0; node < m.nodes(); ++node) {
        ix.decode(node, c);
        for (int a = 0; a < dims; ++a) {
            const int n = m.shape().extent[a];
            int v = phi.scale * phi.sign[a] * c[phi.perm[a]] + phi.shift[a];
            v %= n;
            if (v < 0) v += n;
            src[a] = v;
        }
        const int64_t snode = ix.encode(src);
        for (int t = 0; t < d; ++t)
            out.node_values(node)[t] = m.lift(snode, t);
    }
    return out;
}

double conformal_equivariance_check(const GridMap& m, const LatticeSimilarity& phi) {
    validate_similarity(m, phi);
    const int dims = m.domain_dim();
    const int n = dims - 1;
    const GridMap comp = compose_with_similarity(m, phi);
    const JetField jf = compute_jets(m);
    const JetField jc = compute_jets(comp);

    // dphi as a dims x dims matrix: dphi e_a = scale * sign[b] e_b, b = perm^{-1}(a).
    Eigen::MatrixXd dphi = Eigen::MatrixXd::Zero(dims, dims);
    for (int b = 0; b < dims; ++b) dphi(b, phi.perm[b]) = phi.scale * phi.sign[b];
    const double mu_pow = pow_int(static_cast<double>(phi.scale), n - 1);

    const GridIndexer& ix = m.indexer();
    int c[4], src[4];
    double worst = 0.0;
    for (int64_t node = 0; node < m.nodes(); ++node) {
        ix.decode(node, c);
        for (int a = 0; a < dims; ++a) {
            const int nn = m.shape().extent[a];
            int v = phi.scale * phi.sign[a] * c[phi.perm[a]] + phi.shift[a];
            v %= nn;
            if (v < 0) v += nn;
            src[a] = v;
        }
        const int64_t snode = ix.encode(src);
        const SmallMat lhs = jc.mcr_at(node);
        const SmallMat rhs = jf.mcr_at(snode) * dphi;
        worst = std::max(worst, (lhs - mu_pow * rhs).norm());
    }
    return worst;
}

} // namespace mhf
