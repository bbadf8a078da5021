#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracadapt/adapt.hpp"
#include "fracadapt/initial.hpp"
#include "fracadapt/innovations.hpp"
#include "fracadapt/score.hpp"

namespace fracadapt {

struct McConfig {
    int n = 64;
    int reps = 1000;
    std::vector<double> xi0_list{-0.25, 0.25, 0.75, 1.25};
    InnovationDist dist;
    std::vector<PhiKind> phi_kinds{PhiKind::identity, PhiKind::bounded};
    std::vector<int> L_list{1, 2, 3, 4};
    InitialMethod initial = InitialMethod::tapered_whittle;
    double trim_lo = -0.4;
    double trim_hi = 1.75;
    double grid_step = 0.01;
    int taper_order = 2;
    int burn_in = 5000;
    std::uint64_t base_seed = 1;
    int threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Efficiency-study preset for one of the five innovation laws (table 1..5).
McConfig table_preset(int table);

struct McCell {
    double mse_initial = 0.0;
    double mse_adaptive = 0.0;
    double ratio = 0.0;
    int boundary_hits = 0;
    int failures = 0;
    int used = 0;
};

/// Per-replication outcome, exposed for studies that need more than the MSE ratio.
struct McReplication {
    bool ok = false;
    double xi_initial = 0.0;
    double xi_adaptive = 0.0;
    bool boundary = false;
};

std::vector<McReplication> run_replications(const McConfig& cfg, double xi0, PhiKind phi, int L);

McCell run_cell(const McConfig& cfg, double xi0, PhiKind phi, int L);

struct McRow {
    std::string dist;
    double xi0 = 0.0;
    PhiKind phi = PhiKind::identity;
    int L = 1;
    McCell cell;
};

struct McTables {
    std::vector<McRow> rows;

    const McRow* find(double xi0, PhiKind phi, int L) const;
    std::string to_csv() const;
    std::string to_text() const;
};

McTables run_tables(const McConfig& cfg);

struct DeltaPoint {
    int t = 0;
    double mean_sq = 0.0;
    double t_mean_sq = 0.0;
};

/// Mean squared truncation error delta_t = e_t(theta0) - sigma0 eps_t of the
/// truncated AR transform, averaged over replications. spec carries the
/// short-memory coefficients of the generating model.
std::vector<DeltaPoint> delta_diagnostic(double xi0, const InnovationDist& dist, int n, int reps,
                                         std::uint64_t base_seed, const ModelSpec& spec = ModelSpec::farima(0, 0),
                                         int burn_in = 5000, int threads = 0);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace fracadapt
