#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"
#include "jets.hpp"
#include "reduce.hpp"

namespace mhf {

void SolverConfig::validate() const {
    if (max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
    if (!(grad_tol >= 0.0)) throw InvalidArgument("grad_tol must be >= 0");
    if (!(step0 > 0.0)) throw InvalidArgument("step0 must be > 0");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw InvalidArgument("backtrack must lie in (0,1)");
    if (!(armijo > 0.0 && armijo < 1.0)) throw InvalidArgument("armijo must lie in (0,1)");
    if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
}

std::string FlowHistory::to_csv() const {
    std::string out = "iter,energy,pullback,gap,max_residual,step\n";
    char buf[160];
    for (const FlowRecord& r : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(r.iter), r.energy, r.pullback, r.gap,
                      r.max_residual, r.step);
        out += buf;
    }
    return out;
}

namespace {

/// Lean sweeps for the descent loop: energy and the minimum pullback
/// density, straight off the value array.
struct FlowWorkspace {
    int d, dims, n;
    int64_t count;
    double vol;

    explicit FlowWorkspace(const GridMap& m)
        : d(m.target_dim()),
          dims(m.domain_dim()),
          n(m.domain_dim() - 1),
          count(m.nodes()),
          vol(1.0 / static_cast<double>(m.nodes())) {}

    double energy(const GridMap& m) const {
        const double ce = energy_density_const(n);
        std::vector<double> e(count);
        for (int64_t node = 0; node < count; ++node) {
            const double nrm = finite_diff_jacobian(m, node).norm();
            double p = nrm;
            for (int t = 1; t < n + 1; ++t) p *= nrm;
            e[node] = ce * p;
        }
        return pairwise_sum(e) * vol;
    }

    double min_pullback_density(const GridMap& m) const {
        double mn = std::numeric_limits<double>::infinity();
        for (int64_t node = 0; node < count; ++node)
            mn = std::min(mn, pullback_density(m.triad(), finite_diff_jacobian(m, node)));
        return mn;
    }
};

} // namespace

double discrete_energy(const GridMap& m) { return FlowWorkspace(m).energy(m); }

std::vector<double> energy_gradient(const GridMap& m) {
    if (!m.shape().fully_periodic())
        throw InvalidArgument("energy gradient needs a fully periodic domain");
    const int d = m.target_dim();
    const int dims = m.domain_dim();
    const int n = dims - 1;
    const int64_t count = m.nodes();
    const double vol = 1.0 / static_cast<double>(count);
    const double cg = mcr_leading_const(n); // (n+1) * energy_density_const(n)

    // flux G = cg |du|^{n-1} du per node
    std::vector<double> flux(count * d * dims);
    for (int64_t node = 0; node < count; ++node) {
        const SmallMat du = finite_diff_jacobian(m, node);
        const double nrm = du.norm();
        double w = cg;
        for (int t = 0; t < n - 1; ++t) w *= nrm;
        double* f = flux.data() + node * d * dims;
        for (int a = 0; a < dims; ++a)
            for (int c = 0; c < d; ++c) f[a * d + c] = w * du(c, a);
    }
    // gradient = -vol * central divergence of the flux
    std::vector<double> grad(count * d);
    const GridIndexer& ix = m.indexer();
    for (int64_t node = 0; node < count; ++node) {
        for (int c = 0; c < d; ++c) grad[node * d + c] = 0.0;
        for (int a = 0; a < dims; ++a) {
            const double h = m.shape().spacing(a);
            const int64_t up = ix.shift(node, a, 1);
            const int64_t dn = ix.shift(node, a, -1);
            const double* fu = flux.data() + up * d * dims + a * d;
            const double* fd = flux.data() + dn * d * dims + a * d;
            for (int c = 0; c < d; ++c)
                grad[node * d + c] += vol * (fd[c] - fu[c]) / (2.0 * h);
        }
    }
    return grad;
}

FlowResult minimize_energy(const GridMap& m0, const SolverConfig& cfg) {
    cfg.validate();
    if (!m0.shape().fully_periodic())
        throw InvalidArgument("minimize_energy needs a fully periodic domain");

    GridMap current = m0;
    FlowWorkspace ws(current);
    const int d = ws.d;
    const int64_t count = ws.count;

    const bool guard_orientation = ws.min_pullback_density(current) >= -1e-12;

    FlowResult result{current, {}, FlowStatus::iter_cap, 0};
    double energy = ws.energy(current);

    const auto record = [&](int64_t iter, double step) {
        const DiagnosticsReport rep = energy_report(current);
        FlowRecord row;
        row.iter = iter;
        row.energy = energy;
        row.pullback = rep.pullback_integral;
        row.gap = energy - rep.pullback_integral;
        row.max_residual = rep.max_mcr_residual;
        row.step = step;
        result.history.rows.push_back(row);
    };

    record(0, 0.0);

    GridMap trial = current;
    double step = cfg.step0;
    int64_t iter = 0;
    bool done = false;
    FlowStatus status = FlowStatus::iter_cap;

    while (!done) {
        if (iter >= cfg.max_iters) {
            status = FlowStatus::iter_cap;
            break;
        }
        const std::vector<double> grad = energy_gradient(current);
        double gmax = 0.0;
        {
            for (int64_t node = 0; node < count; ++node) {
                double s = 0.0;
                for (int c = 0; c < d; ++c) {
                    const double g = grad[node * d + c];
                    s += g * g;
                }
                gmax = std::max(gmax, std::sqrt(s));
            }
        }
        if (gmax <= cfg.grad_tol) {
            status = FlowStatus::converged;
            break;
        }
        std::vector<double> g2(count);
        for (int64_t node = 0; node < count; ++node) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) {
                const double g = grad[node * d + c];
                s += g * g;
            }
            g2[node] = s;
        }
        const double grad_sq = pairwise_sum(g2);

        // warm-started backtracking: try one growth over the last step
        step = std::min(step / cfg.backtrack, 1e12);
        bool accepted = false;
        while (true) {
            std::vector<double>& tv = trial.values();
            const std::vector<double>& cv = current.values();
            for (size_t t = 0; t < tv.size(); ++t) tv[t] = cv[t] - step * grad[t];
            // strict inequality: plateau steps at roundoff scale are rejected
            // rather than accepted as zero-progress moves
            const double trial_energy = ws.energy(trial);
            const bool armijo_ok = trial_energy < energy - cfg.armijo * step * grad_sq;
            const bool orient_ok =
                !guard_orientation || ws.min_pullback_density(trial) >= -1e-10;
            if (armijo_ok && orient_ok) {
                std::swap(current.values(), trial.values());
                energy = trial_energy;
                accepted = true;
                break;
            }
            step *= cfg.backtrack;
            if (step < 1e-16) break;
        }
        if (!accepted) {
            status = FlowStatus::stalled;
            break;
        }
        ++iter;
        if (iter % cfg.record_every == 0) record(iter, step);
    }

    result.iterations = iter;
    result.status = status;
    result.map = current;
    if (result.history.rows.empty() || result.history.rows.back().iter != iter)
        record(iter, step);
    return result;
}

KvReport SolutionReport::to_report() const {
    KvReport r;
    r.add("max_mcr_residual", max_mcr_residual);
    r.add("energy_identity_err", energy_identity_err);
    r.add("weak_conformal_residual", weak_conformal_residual);
    r.add("tol", tol);
    r.add_bool("pass", pass);
    return r;
}

SolutionReport verify_solution(const GridMap& m, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("verify_solution needs tol > 0");
    const DiagnosticsReport rep = energy_report(m);
    SolutionReport out;
    out.tol = tol;
    out.max_mcr_residual = rep.max_mcr_residual;
    out.energy_identity_err = std::abs(rep.energy_np1 - rep.pullback_integral) /
                              std::max(1.0, rep.energy_np1);
    out.weak_conformal_residual = rep.max_weak_conformal_residual;
    out.pass = out.max_mcr_residual <= tol && out.energy_identity_err <= tol &&
               out.weak_conformal_residual <= tol;
    return out;
}

} // namespace mhf
