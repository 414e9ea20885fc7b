#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltg/guidance.hpp"
#include "ltg/rng.hpp"

namespace ltg {

/// Grid campaign over forced-arc length (Tf) and coast length (Tn):
/// every cell solves the guidance problem for a batch of random initial
/// conditions and records feasibility and mean optimal cost.
struct SweepConfig {
    std::vector<double> tf_orbits;     // forced-arc lengths [chief orbits]
    std::vector<double> tn_seconds;    // coast lengths [s]
    int samples_per_cell = 100;
    Vector6d y0_lower = Vector6d::Constant(-1000.0);  // uniform bounds [m]
    Vector6d y0_upper = Vector6d::Constant(1000.0);
    RoeState yf{};                     // common target
    double horizon_orbits = 15.0;
    OrbitalElements chief_mean;        // shared chief
    double f_max = 7e-3;               // [N]
    double mass = 200.0;               // [kg]
    int n_dir = 12;
    double gamma_first = 0.0;          // [rad]
    EarthModel earth{};
    SolverSettings solver{};
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Outcome of one (Tf, Tn) cell.
struct CellResult {
    double tf_orbits = 0.0;
    double tn_seconds = 0.0;
    bool success = false;       // every sample solved
    double mean_cost = 0.0;     // mean optimal objective over solved samples
    double fitness = 0.0;       // 1 / mean_cost, success cells only
    int solved = 0;
    int infeasible = 0;
    int failed = 0;             // solver failures / grid construction errors
    std::string diagnostic;     // first failure message, if any
};

struct SweepResult {
    std::vector<double> tf_orbits;   // row axis
    std::vector<double> tn_seconds;  // column axis
    std::vector<CellResult> cells;   // row-major: index = tf_idx * tn.size() + tn_idx

    const CellResult& cell(std::size_t tf_idx, std::size_t tn_idx) const {
        return cells[tf_idx * tn_seconds.size() + tn_idx];
    }
};

/// Run the full campaign. Samples are drawn from per-(cell, sample)
/// substreams and results stored by index, so the OpenMP fan-out is
/// bitwise identical to the serial path.
SweepResult run_sweep(const SweepConfig& config, bool parallel = true);

/// Reciprocal mean cost on success cells, NaN elsewhere; row-major layout
/// matching SweepResult.
std::vector<double> fitness_map(const SweepResult& result);

/// The published campaign axes: Tf in {0.025, 0.05, 0.1, ..., 0.5, 0.6,
/// 0.7} orbits and Tn in {60, 90, ..., 240} s (13 x 7 = 91 cells).
std::vector<double> reference_tf_grid();
std::vector<double> reference_tn_grid();

}  // namespace ltg
