#include "ltg/closed_loop.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ltg {

namespace {

std::string infeasible_message(const Vector6d& residual) {
    std::ostringstream oss;
    oss << "closed loop: guidance infeasible at start, terminal defect " << residual.norm()
        << " m";
    return oss.str();
}

}  // namespace

InfeasibleAtStart::InfeasibleAtStart(const Vector6d& residual_m)
    : std::runtime_error(infeasible_message(residual_m)), boundary_residual(residual_m) {}

std::pair<CartesianState, OrbitalElements> perturb_absolute(const OrbitalElements& oe,
                                                            double sigma_r, double sigma_v,
                                                            double mu, RandomStream& rng,
                                                            int* resamples) {
    const CartesianState x = oe_to_cartesian(oe, mu);
    for (;;) {
        const Eigen::Vector3d dr = sigma_r * rng.normal3();
        const Eigen::Vector3d dv = sigma_v * rng.normal3();
        if (sigma_r == 0.0 && sigma_v == 0.0) return {x, oe};
        const CartesianState noisy{x.r + dr, x.v + dv};
        const double energy = 0.5 * noisy.v.squaredNorm() - mu / noisy.r.norm();
        if (energy < 0.0) {
            try {
                return {noisy, cartesian_to_oe(noisy, mu)};
            } catch (const std::exception&) {
                // degenerate geometry; fall through and redraw
            }
        }
        if (resamples) ++(*resamples);
    }
}

RoeState perturb_relative(const OrbitalElements& chief_mean, const OrbitalElements& deputy_mean,
                          double sigma_y, RandomStream& rng) {
    Vector6d y = oe_to_roe(chief_mean, deputy_mean).vec();
    for (int j = 0; j < 6; ++j) y[j] += sigma_y * rng.normal();
    return RoeState::from_vec(y);
}

Eigen::Vector3d pointing_error(const Eigen::Vector3d& f, double zeta_pe, RandomStream& rng) {
    const Eigen::Vector3d raw = rng.unit_vector();
    if (zeta_pe == 0.0 || f.norm() == 0.0) return f;
    // Rotating about an axis perpendicular to the thrust direction tilts the
    // vector by exactly zeta_pe; the axis is drawn uniformly in that plane.
    const Eigen::Vector3d dir = f.normalized();
    Eigen::Vector3d axis = raw - raw.dot(dir) * dir;
    if (axis.norm() < 1e-12) axis = dir.unitOrthogonal();
    axis.normalize();
    return Eigen::AngleAxisd(zeta_pe, axis) * f;
}

Eigen::Vector3d saturate(const Eigen::Vector3d& f, double f_max) {
    const double n = f.norm();
    if (n <= f_max || n == 0.0) return f;
    return f * (f_max / n);
}

LoopTrace run_loop(const LoopConfig& config, const NoiseModel& noise,
                   const OrbitalElements& chief_osc, const OrbitalElements& deputy_osc) {
    config.validate();
    noise.validate();
    const TimeGrid& grid = config.spec.grid;
    const EarthModel& earth = config.spec.earth;
    const double mu = earth.mu;

    RandomStream rng(noise.rng_seed);
    LoopTrace trace;
    trace.steps.resize(grid.num_arcs());

    CartesianState chief = oe_to_cartesian(chief_osc, mu);
    CartesianState deputy = oe_to_cartesian(deputy_osc, mu);

    // Profile in use, indexed on the full grid; re-solves overwrite the tail.
    std::vector<Eigen::Vector3d> thrust_by_arc(grid.num_arcs(), Eigen::Vector3d::Zero());
    std::vector<RoeState> pred_by_instant(grid.num_arcs() + 1);
    std::vector<bool> pred_valid(grid.num_arcs() + 1, false);

    for (std::size_t k = 0; k < grid.num_arcs(); ++k) {
        LoopStep& step = trace.steps[k];
        step.t_start = grid.instants[k];
        step.t_end = grid.instants[k + 1];
        step.kind = grid.arc_kinds[k];
        const double dt = step.t_end - step.t_start;

        const OrbitalElements chief_mean = osc_to_mean(cartesian_to_oe(chief, mu), earth);
        const OrbitalElements deputy_mean = osc_to_mean(cartesian_to_oe(deputy, mu), earth);
        step.y_true = oe_to_roe(chief_mean, deputy_mean);

        Eigen::Vector3d f_inertial = Eigen::Vector3d::Zero();
        if (grid.is_forced(k)) {
            // Fixed draw order per forced arc: chief state, deputy state,
            // ROE estimate, misalignment axis.
            auto [chief_nav_cart, chief_nav_osc] =
                perturb_absolute(cartesian_to_oe(chief, mu), noise.sigma_r_chief,
                                 noise.sigma_v_chief, mu, rng, &trace.resample_count);
            perturb_absolute(cartesian_to_oe(deputy, mu), noise.sigma_r_deputy,
                             noise.sigma_v_deputy, mu, rng, &trace.resample_count);
            step.y_est = perturb_relative(chief_mean, deputy_mean, noise.sigma_y, rng);
            step.has_estimate = true;
            if (pred_valid[k]) step.y_pred = pred_by_instant[k];

            const bool rerun =
                k == 0 || !pred_valid[k] ||
                (step.y_est.vec() - step.y_pred.vec()).norm() >= config.epsilon;
            if (rerun) {
                GuidanceSpec sub = config.spec;
                sub.y0 = step.y_est;
                const OrbitalElements chief_nav_mean = osc_to_mean(chief_nav_osc, earth);
                if (k == 0) {
                    sub.grid = grid;
                    sub.grid.chief_epoch_elements = chief_nav_mean;
                } else {
                    sub.grid = grid.suffix_from(k, chief_nav_mean);
                }
                try {
                    const GuidancePlan plan = solve_guidance(sub, config.solver);
                    for (std::size_t j = 0; j < plan.num_arcs(); ++j)
                        thrust_by_arc[k + j] = plan.thrust[j];
                    for (std::size_t j = 0; j <= plan.num_arcs(); ++j) {
                        pred_by_instant[k + j] = plan.nodes[j];
                        pred_valid[k + j] = true;
                    }
                    step.guidance_rerun = true;
                    step.solve_time = plan.solve_time;
                    ++trace.resolve_count;
                } catch (const GuidanceInfeasible& e) {
                    if (k == 0) throw InfeasibleAtStart(e.boundary_residual);
                    step.guidance_failed = true;
                    ++trace.fallback_count;
                } catch (const GuidanceSolverFailure&) {
                    if (k == 0) throw;
                    step.guidance_failed = true;
                    ++trace.fallback_count;
                }
            }

            step.f_commanded = thrust_by_arc[k];
            const Eigen::Vector3d f_sat = saturate(step.f_commanded, config.spec.f_max);
            step.f_applied = pointing_error(f_sat, noise.zeta_pe, rng);
            f_inertial = rtn_rotation(chief_nav_cart).to_inertial(step.f_applied);
            trace.delta_v_total += step.f_applied.norm() / config.spec.mass * dt;
        }

        try {
            chief = propagate(chief, Eigen::Vector3d::Zero(), config.spec.mass, dt, config.prop);
            deputy = propagate(deputy, f_inertial, config.spec.mass, dt, config.prop);
        } catch (const std::exception& e) {
            throw std::runtime_error("closed loop: propagation failed on arc " +
                                     std::to_string(k) + ": " + e.what());
        }
    }

    const OrbitalElements chief_mean = osc_to_mean(cartesian_to_oe(chief, mu), earth);
    const OrbitalElements deputy_mean = osc_to_mean(cartesian_to_oe(deputy, mu), earth);
    trace.y_final = oe_to_roe(chief_mean, deputy_mean);
    trace.terminal_error = trace.y_final.vec() - config.spec.yf.vec();
    return trace;
}

std::vector<LoopSummary> run_monte_carlo(const LoopConfig& config, const NoiseModel& noise,
                                         const OrbitalElements& chief_osc,
                                         const OrbitalElements& deputy_osc,
                                         const std::vector<std::uint64_t>& seeds,
                                         bool parallel) {
    std::vector<LoopSummary> out(seeds.size());
    const auto worker = [&](std::size_t idx) {
        LoopSummary& s = out[idx];
        s.seed = seeds[idx];
        NoiseModel run_noise = noise;
        run_noise.rng_seed = seeds[idx];
        try {
            const LoopTrace trace = run_loop(config, run_noise, chief_osc, deputy_osc);
            s.terminal_error = trace.terminal_error;
            s.delta_v_total = trace.delta_v_total;
            s.resolve_count = trace.resolve_count;
            s.fallback_count = trace.fallback_count;
        } catch (const std::exception&) {
            s.failed = true;
        }
    };

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(seeds.size()); ++i)
            worker(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < seeds.size(); ++i) worker(i);
    }
    return out;
}

}  // namespace ltg
