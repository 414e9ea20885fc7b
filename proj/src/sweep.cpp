#include "ltg/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltg {

void SweepConfig::validate() const {
    if (tf_orbits.empty() || tn_seconds.empty())
        throw std::invalid_argument("sweep: empty Tf or Tn grid");
    if (samples_per_cell < 1) throw std::invalid_argument("sweep: samples_per_cell must be >= 1");
    if (!(horizon_orbits > 0.0)) throw std::invalid_argument("sweep: horizon must be > 0");
    for (int j = 0; j < 6; ++j) {
        if (!std::isfinite(y0_lower[j]) || !std::isfinite(y0_upper[j]) ||
            y0_lower[j] > y0_upper[j])
            throw std::invalid_argument("sweep: invalid y0 bounds");
    }
    chief_mean.validate();
    solver.validate();
}

namespace {

struct SampleOutcome {
    enum class Kind { Solved, Infeasible, Failed } kind = Kind::Failed;
    double cost = 0.0;
    std::string message;
};

RoeState draw_y0(const SweepConfig& config, RandomStream& rng) {
    Vector6d y;
    for (int j = 0; j < 6; ++j)
        y[j] = config.y0_lower[j] + (config.y0_upper[j] - config.y0_lower[j]) * rng.uniform();
    return RoeState::from_vec(y);
}

SampleOutcome run_sample(const SweepConfig& config, double tf_orb, double tn_s,
                         const RoeState& y0) {
    SampleOutcome out;
    try {
        const double period = orbit_period(config.chief_mean.a, config.earth.mu);
        GuidanceSpec spec;
        spec.grid = build_grid(0.0, config.horizon_orbits * period, tf_orb * period, tn_s,
                               config.chief_mean);
        spec.y0 = y0;
        spec.yf = config.yf;
        spec.f_max = config.f_max;
        spec.mass = config.mass;
        spec.n_dir = config.n_dir;
        spec.gamma_first = config.gamma_first;
        spec.earth = config.earth;
        const GuidancePlan plan = solve_guidance(spec, config.solver);
        out.kind = SampleOutcome::Kind::Solved;
        out.cost = plan.cost;
    } catch (const GuidanceInfeasible& e) {
        out.kind = SampleOutcome::Kind::Infeasible;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.kind = SampleOutcome::Kind::Failed;
        out.message = e.what();
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, bool parallel) {
    config.validate();
    const std::size_t n_tf = config.tf_orbits.size();
    const std::size_t n_tn = config.tn_seconds.size();
    const std::size_t n_cells = n_tf * n_tn;
    const std::size_t per_cell = static_cast<std::size_t>(config.samples_per_cell);

    // Common random numbers: every cell evaluates the same sample set, so
    // cell-to-cell fitness differences reflect (Tf, Tn) and not the draws.
    std::vector<RoeState> samples(per_cell);
    const RandomStream root(config.rng_seed);
    for (std::size_t s = 0; s < per_cell; ++s) {
        RandomStream rng = root.substream(s);
        samples[s] = draw_y0(config, rng);
    }

    // Flat (cell, sample) task list with by-index storage keeps the
    // parallel reduction deterministic.
    std::vector<SampleOutcome> outcomes(n_cells * per_cell);
    const auto task = [&](std::size_t flat) {
        const std::size_t cell = flat / per_cell;
        const double tf = config.tf_orbits[cell / n_tn];
        const double tn = config.tn_seconds[cell % n_tn];
        outcomes[flat] = run_sample(config, tf, tn, samples[flat % per_cell]);
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(outcomes.size()); ++i)
            task(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < outcomes.size(); ++i) task(i);
    }

    SweepResult result;
    result.tf_orbits = config.tf_orbits;
    result.tn_seconds = config.tn_seconds;
    result.cells.resize(n_cells);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        CellResult& c = result.cells[cell];
        c.tf_orbits = config.tf_orbits[cell / n_tn];
        c.tn_seconds = config.tn_seconds[cell % n_tn];
        double cost_sum = 0.0;
        for (std::size_t s = 0; s < per_cell; ++s) {
            const SampleOutcome& o = outcomes[cell * per_cell + s];
            switch (o.kind) {
                case SampleOutcome::Kind::Solved:
                    ++c.solved;
                    cost_sum += o.cost;
                    break;
                case SampleOutcome::Kind::Infeasible:
                    ++c.infeasible;
                    break;
                case SampleOutcome::Kind::Failed:
                    ++c.failed;
                    break;
            }
            if (o.kind != SampleOutcome::Kind::Solved && c.diagnostic.empty())
                c.diagnostic = o.message;
        }
        c.success = c.solved == static_cast<int>(per_cell);
        if (c.solved > 0) c.mean_cost = cost_sum / c.solved;
        if (c.success && c.mean_cost > 0.0) c.fitness = 1.0 / c.mean_cost;
    }
    return result;
}

std::vector<double> fitness_map(const SweepResult& result) {
    std::vector<double> out(result.cells.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < result.cells.size(); ++i)
        if (result.cells[i].success) out[i] = result.cells[i].fitness;
    return out;
}

std::vector<double> reference_tf_grid() {
    return {0.025, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.7};
}

std::vector<double> reference_tn_grid() { return {60, 90, 120, 150, 180, 210, 240}; }

}  // namespace ltg
