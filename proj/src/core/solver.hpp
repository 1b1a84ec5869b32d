#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridmap.hpp"
#include "report.hpp"

namespace mhf {

struct SolverConfig {
    int64_t max_iters = 50000;
    double grad_tol = 1e-8;
    double step0 = 1.0;
    double backtrack = 0.5;
    double armijo = 1e-4;
    int64_t record_every = 10;

    void validate() const; // throws InvalidArgument
};

struct FlowRecord {
    int64_t iter = 0;
    double energy = 0.0;
    double pullback = 0.0;
    double gap = 0.0;
    double max_residual = 0.0;
    double step = 0.0;
};

struct FlowHistory {
    std::vector<FlowRecord> rows;
    std::string to_csv() const; // header: iter,energy,pullback,gap,max_residual,step
};

enum class FlowStatus { converged, iter_cap, stalled };

struct FlowResult {
    GridMap map;
    FlowHistory history;
    FlowStatus status = FlowStatus::converged;
    int64_t iterations = 0;
};

/// Nodal quadrature of the energy density; the objective the flow descends.
double discrete_energy(const GridMap& m);

/// Exact gradient of discrete_energy with respect to the node values
/// (discretize-then-differentiate); one d-vector per node, includes the node
/// volume factor. Requires a fully periodic domain.
std::vector<double> energy_gradient(const GridMap& m);

/// Gradient descent with Armijo backtracking. Each accepted step strictly
/// decreases the energy; steps whose trial map acquires a node of pullback
/// density below -1e-10 are rejected like failed sufficient-decrease steps
/// (the guard is active only when the initial map is orientation
/// non-reversing). Terminates at grad_tol, max_iters, or when the
/// backtracked step underflows 1e-16 (stall); partial history is returned in
/// every case.
FlowResult minimize_energy(const GridMap& m0, const SolverConfig& cfg);

struct SolutionReport {
    double max_mcr_residual = 0.0;
    double energy_identity_err = 0.0; // |E - pullback| / max(1, E)
    double weak_conformal_residual = 0.0;
    double tol = 0.0;
    bool pass = false;
    KvReport to_report() const;
};

/// Multiholomorphy certificate: residual, energy identity, weak conformality.
SolutionReport verify_solution(const GridMap& m, double tol);

} // namespace mhf
