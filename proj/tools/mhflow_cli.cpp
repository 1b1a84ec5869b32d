// mhflow command-line driver.
//
// Commands: verify-triad, check-map, flow, report. Configuration is a flat
// key=value store assembled from an optional --config file, then repeated
// --set key=value flags, then the --seed / --out shorthands (later wins).
// Exit codes: 0 ok, 2 check failure, 3 iteration cap, 4 stall, 64 usage,
// 65 data error.
//
// This tool speaks only the C API in mhflow.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mhflow.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 2;
constexpr int kExitIterCap = 3;
constexpr int kExitStall = 4;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Config = std::map<std::string, std::string>;

void usage(std::ostream& os) {
    os << "usage: mhflow <command> [--config PATH] [--out PATH] [--seed N]"
          " [--set key=value]...\n"
          "\n"
          "commands:\n"
          "  verify-triad   compatibility and comass checks for a triad family\n"
          "                 keys: family (required), dim, samples, frames, seed,\n"
          "                       tol, output\n"
          "  check-map      diagnostics report for a GMAP file\n"
          "                 keys: input (required), output\n"
          "  flow           minimize the energy of a GMAP file\n"
          "                 keys: input (required), output, history, max_iters,\n"
          "                       grad_tol, step0, backtrack, armijo, record_every\n"
          "  report         multiholomorphy certificate for a GMAP file\n"
          "                 keys: input (required), tol, output\n";
}

void add_kv(Config& cfg, const std::string& item, const std::string& where) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("expected key=value in " + where + ", got '" + item + "'");
    cfg[item.substr(0, eq)] = item.substr(eq + 1);
}

void load_config_file(Config& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed;
        size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t");
        trimmed = line.substr(b, e - b + 1);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        add_kv(cfg, trimmed, path + ":" + std::to_string(lineno));
    }
}

const std::string& require_key(const Config& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw UsageError("missing required key '" + key + "'");
    return it->second;
}

std::string get_or(const Config& cfg, const std::string& key, const std::string& dflt) {
    auto it = cfg.find(key);
    return it == cfg.end() ? dflt : it->second;
}

long long parse_ll(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw UsageError("key '" + key + "' needs an integer, got '" + s + "'");
    return v;
}

double parse_num(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw UsageError("key '" + key + "' needs a number, got '" + s + "'");
    return v;
}

void reject_unknown(const Config& cfg, const std::set<std::string>& known) {
    for (const auto& [k, v] : cfg)
        if (!known.count(k)) throw UsageError("unknown key '" + k + "'");
}

void emit(const Config& cfg, const std::string& text) {
    const std::string out = get_or(cfg, "output", "");
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw DataError("cannot open '" + out + "' for writing");
    f << text;
    if (!f.good()) throw DataError("error writing '" + out + "'");
}

[[noreturn]] void throw_data_error(const char* what) {
    throw DataError(std::string(what) + ": " + mhf_last_error());
}

int default_dim(const std::string& family) {
    if (family == "associative") return 7;
    if (family == "cayley") return 8;
    if (family == "hermitian") return 4;
    return 3; // conformal
}

int run_verify_triad(const Config& cfg) {
    reject_unknown(cfg, {"family", "dim", "samples", "frames", "seed", "tol", "output"});
    const std::string family = require_key(cfg, "family");
    const int dim = static_cast<int>(parse_ll(get_or(cfg, "dim",
                                                     std::to_string(default_dim(family))),
                                              "dim"));
    const int samples = static_cast<int>(parse_ll(get_or(cfg, "samples", "10000"), "samples"));
    const int frames = static_cast<int>(parse_ll(get_or(cfg, "frames", "100000"), "frames"));
    const uint64_t seed = static_cast<uint64_t>(parse_ll(get_or(cfg, "seed", "0"), "seed"));
    const double tol = parse_num(get_or(cfg, "tol", "1e-10"), "tol");

    mhf_triad* triad = nullptr;
    if (mhf_triad_create(family.c_str(), dim, &triad) != MHF_OK)
        throw UsageError(std::string("cannot build triad: ") + mhf_last_error());
    mhf_report* rep = nullptr;
    const mhf_status st = mhf_triad_verify(triad, samples, frames, tol, seed, &rep);
    mhf_triad_destroy(triad);
    if (st != MHF_OK) throw UsageError(std::string("triad check: ") + mhf_last_error());
    emit(cfg, mhf_report_text(rep));
    const int pass = mhf_report_pass(rep);
    mhf_report_destroy(rep);
    return pass == 1 ? kExitOk : kExitCheckFailed;
}

int run_check_map(const Config& cfg) {
    reject_unknown(cfg, {"input", "output"});
    mhf_gridmap* map = nullptr;
    if (mhf_gridmap_read_file(require_key(cfg, "input").c_str(), &map) != MHF_OK)
        throw_data_error("cannot read map");
    mhf_report* rep = nullptr;
    const mhf_status st = mhf_gridmap_diagnostics(map, &rep);
    mhf_gridmap_destroy(map);
    if (st != MHF_OK) throw_data_error("diagnostics failed");
    emit(cfg, mhf_report_text(rep));
    mhf_report_destroy(rep);
    return kExitOk;
}

int run_flow(const Config& cfg) {
    reject_unknown(cfg, {"input", "output", "history", "max_iters", "grad_tol", "step0",
                         "backtrack", "armijo", "record_every"});
    mhf_gridmap* map = nullptr;
    if (mhf_gridmap_read_file(require_key(cfg, "input").c_str(), &map) != MHF_OK)
        throw_data_error("cannot read map");

    mhf_solver_config sc;
    mhf_solver_config_init(&sc);
    if (cfg.count("max_iters")) sc.max_iters = parse_ll(cfg.at("max_iters"), "max_iters");
    if (cfg.count("grad_tol")) sc.grad_tol = parse_num(cfg.at("grad_tol"), "grad_tol");
    if (cfg.count("step0")) sc.step0 = parse_num(cfg.at("step0"), "step0");
    if (cfg.count("backtrack")) sc.backtrack = parse_num(cfg.at("backtrack"), "backtrack");
    if (cfg.count("armijo")) sc.armijo = parse_num(cfg.at("armijo"), "armijo");
    if (cfg.count("record_every"))
        sc.record_every = parse_ll(cfg.at("record_every"), "record_every");

    mhf_gridmap* final_map = nullptr;
    mhf_history* hist = nullptr;
    const mhf_status st = mhf_flow_minimize(map, &sc, &final_map, &hist);
    mhf_gridmap_destroy(map);
    if (st != MHF_OK && st != MHF_ERR_ITER_CAP && st != MHF_ERR_STALL) {
        if (final_map) mhf_gridmap_destroy(final_map);
        if (hist) mhf_history_destroy(hist);
        if (st == MHF_ERR_INVALID_ARGUMENT)
            throw UsageError(std::string("flow: ") + mhf_last_error());
        throw_data_error("flow failed");
    }

    const std::string out = get_or(cfg, "output", "");
    if (!out.empty() && mhf_gridmap_write_file(final_map, out.c_str()) != MHF_OK) {
        mhf_gridmap_destroy(final_map);
        mhf_history_destroy(hist);
        throw_data_error("cannot write final map");
    }
    const std::string hist_path = get_or(cfg, "history", "");
    if (!hist_path.empty() && mhf_history_write_csv(hist, hist_path.c_str()) != MHF_OK) {
        mhf_gridmap_destroy(final_map);
        mhf_history_destroy(hist);
        throw_data_error("cannot write history");
    }

    // summary on stdout
    const int64_t rows = mhf_history_rows(hist);
    double last[6] = {0, 0, 0, 0, 0, 0};
    if (rows > 0) mhf_history_row(hist, rows - 1, last);
    std::printf("status=%s\niterations=%" PRId64 "\nenergy=%.17g\npullback=%.17g\ngap=%.17g\n",
                mhf_status_name(st), static_cast<int64_t>(last[0]), last[1], last[2],
                last[3]);

    mhf_gridmap_destroy(final_map);
    mhf_history_destroy(hist);
    if (st == MHF_ERR_ITER_CAP) return kExitIterCap;
    if (st == MHF_ERR_STALL) return kExitStall;
    return kExitOk;
}

int run_report(const Config& cfg) {
    reject_unknown(cfg, {"input", "tol", "output"});
    mhf_gridmap* map = nullptr;
    if (mhf_gridmap_read_file(require_key(cfg, "input").c_str(), &map) != MHF_OK)
        throw_data_error("cannot read map");
    const double tol = parse_num(get_or(cfg, "tol", "1e-8"), "tol");
    mhf_report* rep = nullptr;
    const mhf_status st = mhf_gridmap_verify(map, tol, &rep);
    mhf_gridmap_destroy(map);
    if (st != MHF_OK) throw_data_error("verification failed");
    emit(cfg, mhf_report_text(rep));
    const int pass = mhf_report_pass(rep);
    mhf_report_destroy(rep);
    return pass == 1 ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    try {
        if (argc < 2) throw UsageError("missing command");
        const std::string command = argv[1];
        if (command == "--help" || command == "-h" || command == "help") {
            usage(std::cout);
            return kExitOk;
        }

        Config cfg;
        std::string config_path, out_path, seed_value;
        std::vector<std::string> sets;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            auto next = [&](const char* flag) -> std::string {
                if (i + 1 >= argc) throw UsageError(std::string(flag) + " needs a value");
                return argv[++i];
            };
            if (arg == "--config")
                config_path = next("--config");
            else if (arg == "--out")
                out_path = next("--out");
            else if (arg == "--seed")
                seed_value = next("--seed");
            else if (arg == "--set")
                sets.push_back(next("--set"));
            else
                throw UsageError("unknown flag '" + arg + "'");
        }
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const std::string& s : sets) add_kv(cfg, s, "--set");
        if (!seed_value.empty()) cfg["seed"] = seed_value;
        if (!out_path.empty()) cfg["output"] = out_path;

        if (command == "verify-triad") return run_verify_triad(cfg);
        if (command == "check-map") return run_check_map(cfg);
        if (command == "flow") return run_flow(cfg);
        if (command == "report") return run_report(cfg);
        throw UsageError("unknown command '" + command + "'");
    } catch (const UsageError& e) {
        std::cerr << "mhflow: " << e.what() << "\n";
        usage(std::cerr);
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "mhflow: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "mhflow: " << e.what() << "\n";
        return kExitData;
    }
}
