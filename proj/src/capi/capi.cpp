#include "mhflow.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <new>

#include "../core/errors.hpp"
#include "../core/gmap_io.hpp"
#include "../core/gridmap.hpp"
#include "../core/jets.hpp"
#include "../core/report.hpp"
#include "../core/solver.hpp"
#include "../core/triad.hpp"

struct mhf_triad {
    std::shared_ptr<const mhf::Triad> t;
};

struct mhf_gridmap {
    mhf::GridMap m;
};

struct mhf_report {
    mhf::KvReport r;
    int pass = -1;
};

struct mhf_history {
    mhf::FlowHistory h;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

mhf_status map_code(mhf::ErrorCode c) {
    using EC = mhf::ErrorCode;
    switch (c) {
        case EC::invalid_argument: return MHF_ERR_INVALID_ARGUMENT;
        case EC::dimension: return MHF_ERR_DIMENSION;
        case EC::grade: return MHF_ERR_DIMENSION;
        case EC::unsupported_triad: return MHF_ERR_UNSUPPORTED_TRIAD;
        case EC::parse: return MHF_ERR_PARSE;
        case EC::io: return MHF_ERR_IO;
        case EC::lattice_mismatch: return MHF_ERR_LATTICE;
        case EC::distortion_undefined: return MHF_ERR_DEGENERATE;
        case EC::invalid_exponent: return MHF_ERR_INVALID_ARGUMENT;
    }
    return MHF_ERR_INTERNAL;
}

template <class Fn>
mhf_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const mhf::Error& e) {
        set_error(e.what());
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return MHF_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MHF_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return MHF_ERR_INTERNAL;
    }
}

mhf_status require(bool cond, const char* msg) {
    if (cond) return MHF_OK;
    set_error(msg);
    return MHF_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* mhf_version(void) { return "0.1.0"; }

const char* mhf_status_name(mhf_status status) {
    switch (status) {
        case MHF_OK: return "ok";
        case MHF_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case MHF_ERR_DIMENSION: return "dimension";
        case MHF_ERR_UNSUPPORTED_TRIAD: return "unsupported_triad";
        case MHF_ERR_PARSE: return "parse";
        case MHF_ERR_IO: return "io";
        case MHF_ERR_LATTICE: return "lattice";
        case MHF_ERR_DEGENERATE: return "degenerate";
        case MHF_ERR_STALL: return "stall";
        case MHF_ERR_ITER_CAP: return "iter_cap";
        case MHF_ERR_INTERNAL: return "internal";
    }
    return "?";
}

const char* mhf_last_error(void) { return g_last_error.c_str(); }

/* ---- triads ---- */

mhf_status mhf_triad_create(const char* family, int dim, mhf_triad** out) {
    if (mhf_status s = require(family && out, "family and out must be non-null"); s) return s;
    return guarded([&] {
        auto t = mhf::Triad::make_shared(mhf::parse_family(family), dim);
        *out = new mhf_triad{std::move(t)};
        return MHF_OK;
    });
}

void mhf_triad_destroy(mhf_triad* t) { delete t; }

int mhf_triad_dim(const mhf_triad* t) { return t ? t->t->dim() : 0; }
int mhf_triad_fold(const mhf_triad* t) { return t ? t->t->fold() : 0; }
double mhf_triad_lambda(const mhf_triad* t) { return t ? t->t->lambda() : 0.0; }

mhf_status mhf_triad_check_compatibility(const mhf_triad* t, int samples, double tol,
                                         uint64_t seed, mhf_report** out) {
    if (mhf_status s = require(t && out, "triad and out must be non-null"); s) return s;
    return guarded([&] {
        const auto rep = mhf::check_compatibility(*t->t, samples, tol, seed);
        *out = new mhf_report{rep.to_report(), rep.pass ? 1 : 0};
        return MHF_OK;
    });
}

mhf_status mhf_triad_comass_check(const mhf_triad* t, int frames, uint64_t seed,
                                  mhf_report** out) {
    if (mhf_status s = require(t && out, "triad and out must be non-null"); s) return s;
    return guarded([&] {
        const auto rep = mhf::calibration_comass_check(*t->t, frames, seed);
        *out = new mhf_report{rep.to_report(), rep.pass ? 1 : 0};
        return MHF_OK;
    });
}

mhf_status mhf_triad_verify(const mhf_triad* t, int samples, int frames, double tol,
                            uint64_t seed, mhf_report** out) {
    if (mhf_status s = require(t && out, "triad and out must be non-null"); s) return s;
    return guarded([&] {
        const auto compat = mhf::check_compatibility(*t->t, samples, tol, seed);
        const auto comass = mhf::calibration_comass_check(*t->t, frames, seed + 1);
        mhf::KvReport r;
        r.add("family", std::string(mhf::family_name(t->t->family())));
        r.add("dim", t->t->dim());
        r.add("fold", t->t->fold());
        r.add("lambda", t->t->lambda());
        r.add("seed", static_cast<long long>(seed));
        const mhf::KvReport compat_kv = compat.to_report();
        const mhf::KvReport comass_kv = comass.to_report();
        for (const auto& [k, v] : compat_kv.items())
            if (k != "pass") r.add(k, v);
        for (const auto& [k, v] : comass_kv.items())
            if (k != "pass") r.add("comass_" + k, v);
        const bool pass = compat.pass && comass.pass;
        r.add_bool("pass", pass);
        *out = new mhf_report{std::move(r), pass ? 1 : 0};
        return MHF_OK;
    });
}

/* ---- grid maps ---- */

mhf_status mhf_gridmap_create(const char* family, int target_dim, int domain_dim,
                              const int* shape, const int* periodic, mhf_gridmap** out) {
    if (mhf_status s = require(family && shape && out, "family, shape, out must be non-null"); s)
        return s;
    return guarded([&] {
        mhf::GridShape gs;
        gs.dims = domain_dim;
        for (int a = 0; a < domain_dim && a < 4; ++a) {
            gs.extent[a] = shape[a];
            gs.periodic[a] = periodic ? periodic[a] != 0 : true;
        }
        auto t = mhf::Triad::make_shared(mhf::parse_family(family), target_dim);
        *out = new mhf_gridmap{mhf::GridMap(std::move(t), gs)};
        return MHF_OK;
    });
}

void mhf_gridmap_destroy(mhf_gridmap* m) { delete m; }

mhf_status mhf_gridmap_read_file(const char* path, mhf_gridmap** out) {
    if (mhf_status s = require(path && out, "path and out must be non-null"); s) return s;
    return guarded([&] {
        *out = new mhf_gridmap{mhf::read_gmap_file(path)};
        return MHF_OK;
    });
}

mhf_status mhf_gridmap_write_file(const mhf_gridmap* m, const char* path) {
    if (mhf_status s = require(m && path, "map and path must be non-null"); s) return s;
    return guarded([&] {
        mhf::write_gmap_file(m->m, path);
        return MHF_OK;
    });
}

int64_t mhf_gridmap_node_count(const mhf_gridmap* m) { return m ? m->m.nodes() : 0; }
int mhf_gridmap_target_dim(const mhf_gridmap* m) { return m ? m->m.target_dim() : 0; }
int mhf_gridmap_domain_dim(const mhf_gridmap* m) { return m ? m->m.domain_dim() : 0; }

mhf_status mhf_gridmap_set_values(mhf_gridmap* m, const double* values, int64_t count) {
    if (mhf_status s = require(m && values, "map and values must be non-null"); s) return s;
    if (count != static_cast<int64_t>(m->m.values().size())) {
        set_error("value count must equal node_count * target_dim");
        return MHF_ERR_DIMENSION;
    }
    std::memcpy(m->m.values().data(), values, sizeof(double) * count);
    return MHF_OK;
}

mhf_status mhf_gridmap_get_values(const mhf_gridmap* m, double* values, int64_t count) {
    if (mhf_status s = require(m && values, "map and values must be non-null"); s) return s;
    if (count != static_cast<int64_t>(m->m.values().size())) {
        set_error("value count must equal node_count * target_dim");
        return MHF_ERR_DIMENSION;
    }
    std::memcpy(values, m->m.values().data(), sizeof(double) * count);
    return MHF_OK;
}

mhf_status mhf_gridmap_diagnostics(const mhf_gridmap* m, mhf_report** out) {
    if (mhf_status s = require(m && out, "map and out must be non-null"); s) return s;
    return guarded([&] {
        *out = new mhf_report{mhf::energy_report(m->m).to_report(), -1};
        return MHF_OK;
    });
}

mhf_status mhf_gridmap_verify(const mhf_gridmap* m, double tol, mhf_report** out) {
    if (mhf_status s = require(m && out, "map and out must be non-null"); s) return s;
    return guarded([&] {
        const auto rep = mhf::verify_solution(m->m, tol);
        *out = new mhf_report{rep.to_report(), rep.pass ? 1 : 0};
        return MHF_OK;
    });
}

/* ---- solver ---- */

void mhf_solver_config_init(mhf_solver_config* cfg) {
    if (!cfg) return;
    const mhf::SolverConfig d;
    cfg->max_iters = d.max_iters;
    cfg->grad_tol = d.grad_tol;
    cfg->step0 = d.step0;
    cfg->backtrack = d.backtrack;
    cfg->armijo = d.armijo;
    cfg->record_every = d.record_every;
}

mhf_status mhf_flow_minimize(const mhf_gridmap* m0, const mhf_solver_config* cfg,
                             mhf_gridmap** final_map, mhf_history** history) {
    if (mhf_status s = require(m0 != nullptr, "input map must be non-null"); s) return s;
    return guarded([&]() -> mhf_status {
        mhf::SolverConfig sc;
        if (cfg) {
            sc.max_iters = cfg->max_iters;
            sc.grad_tol = cfg->grad_tol;
            sc.step0 = cfg->step0;
            sc.backtrack = cfg->backtrack;
            sc.armijo = cfg->armijo;
            sc.record_every = cfg->record_every;
        }
        mhf::FlowResult res = mhf::minimize_energy(m0->m, sc);
        if (final_map) *final_map = new mhf_gridmap{std::move(res.map)};
        if (history) *history = new mhf_history{std::move(res.history)};
        switch (res.status) {
            case mhf::FlowStatus::converged: return MHF_OK;
            case mhf::FlowStatus::iter_cap:
                set_error("iteration cap reached before the gradient tolerance");
                return MHF_ERR_ITER_CAP;
            case mhf::FlowStatus::stalled:
                set_error("line search stalled (step underflowed 1e-16)");
                return MHF_ERR_STALL;
        }
        return MHF_ERR_INTERNAL;
    });
}

void mhf_history_destroy(mhf_history* h) { delete h; }

int64_t mhf_history_rows(const mhf_history* h) {
    return h ? static_cast<int64_t>(h->h.rows.size()) : 0;
}

mhf_status mhf_history_row(const mhf_history* h, int64_t row, double* out6) {
    if (mhf_status s = require(h && out6, "history and out must be non-null"); s) return s;
    if (row < 0 || row >= static_cast<int64_t>(h->h.rows.size())) {
        set_error("history row out of range");
        return MHF_ERR_INVALID_ARGUMENT;
    }
    const mhf::FlowRecord& r = h->h.rows[row];
    out6[0] = static_cast<double>(r.iter);
    out6[1] = r.energy;
    out6[2] = r.pullback;
    out6[3] = r.gap;
    out6[4] = r.max_residual;
    out6[5] = r.step;
    return MHF_OK;
}

mhf_status mhf_history_write_csv(const mhf_history* h, const char* path) {
    if (mhf_status s = require(h && path, "history and path must be non-null"); s) return s;
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw mhf::IoError(std::string("cannot open '") + path + "' for writing");
        out << h->h.to_csv();
        out.flush();
        if (!out) throw mhf::IoError(std::string("error writing '") + path + "'");
        return MHF_OK;
    });
}

/* ---- reports ---- */

void mhf_report_destroy(mhf_report* r) { delete r; }

const char* mhf_report_text(const mhf_report* r) {
    if (!r) return "";
    thread_local std::string buf;
    buf = r->r.text();
    return buf.c_str();
}

int mhf_report_pass(const mhf_report* r) { return r ? r->pass : -1; }

double mhf_report_value(const mhf_report* r, const char* key) {
    if (!r || !key) return std::numeric_limits<double>::quiet_NaN();
    return r->r.value(key);
}

} // extern "C"
