#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ltg/guidance.hpp"
#include "ltg/rng.hpp"
#include "ltg/truth_sim.hpp"

namespace ltg {

/// Surrogate error models of the navigation and actuation chain:
/// diagonal Gaussian noise on the absolute states, i.i.d. Gaussian noise
/// on the relative-navigation ROE estimate, and a fixed-angle thruster
/// misalignment about a random axis.
struct NoiseModel {
    double sigma_r_chief = 0.0;    // chief position 1-sigma per axis [m]
    double sigma_v_chief = 0.0;    // chief velocity 1-sigma per axis [m/s]
    double sigma_r_deputy = 0.0;   // deputy position 1-sigma per axis [m]
    double sigma_v_deputy = 0.0;   // deputy velocity 1-sigma per axis [m/s]
    double sigma_y = 0.0;          // ROE estimate 1-sigma per component [m]
    double zeta_pe = 0.0;          // thruster misalignment angle [rad]
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (sigma_r_chief < 0 || sigma_v_chief < 0 || sigma_r_deputy < 0 ||
            sigma_v_deputy < 0 || sigma_y < 0 || zeta_pe < 0)
            throw std::invalid_argument("NoiseModel: standard deviations must be >= 0");
    }
};

/// Execution-loop configuration: the guidance problem plus the rerun
/// threshold and the truth-propagation setup.
struct LoopConfig {
    GuidanceSpec spec;             // grid, yf, actuator bounds; spec.y0 ignored (estimated online)
    double epsilon = 5.0;          // guidance-rerun threshold [m]; may be +inf
    PropagationConfig prop{};
    SolverSettings solver{};

    void validate() const {
        if (!(epsilon > 0.0)) throw std::invalid_argument("LoopConfig: epsilon must be > 0");
        spec.validate();
        prop.validate();
        solver.validate();
    }
};

/// One executed arc of the loop.
struct LoopStep {
    double t_start = 0.0;
    double t_end = 0.0;
    ArcKind kind = ArcKind::Coast;
    RoeState y_true;                          // true mean ROE at t_start
    RoeState y_est;                           // noisy estimate (forced arcs only)
    RoeState y_pred;                          // prediction the estimate was compared to
    bool has_estimate = false;
    bool guidance_rerun = false;              // guidance QP solved at this step
    bool guidance_failed = false;             // rerun attempted but fell back to the old profile
    Eigen::Vector3d f_commanded = Eigen::Vector3d::Zero();  // RTN [N]
    Eigen::Vector3d f_applied = Eigen::Vector3d::Zero();    // RTN, after saturation + misalignment [N]
    double solve_time = 0.0;                  // [s], zero when guidance skipped
};

/// Full record of one closed-loop run.
struct LoopTrace {
    std::vector<LoopStep> steps;              // one per grid arc
    RoeState y_final;                         // true mean ROE at the horizon end
    Vector6d terminal_error = Vector6d::Zero();  // y_final - yf [m]
    double delta_v_total = 0.0;               // [m/s]
    int resolve_count = 0;                    // guidance solves, including the initial one
    int fallback_count = 0;                   // reruns that failed and reused the old profile
    int resample_count = 0;                   // absolute-noise draws rejected as unbound
};

/// Raised when the guidance problem is infeasible at loop start (the only
/// failure Algorithm-style execution cannot absorb by reusing a profile).
struct InfeasibleAtStart : std::runtime_error {
    explicit InfeasibleAtStart(const Vector6d& residual_m);
    Vector6d boundary_residual;  // [m]
};

/// Absolute-navigation surrogate: map the elements to a Cartesian state,
/// add zero-mean per-axis Gaussian noise to position and velocity, and map
/// back. Draws producing unbound orbits are rejected and redrawn;
/// resamples counts the rejections. Output elements are osculating-flavor
/// reconversions of the noisy state.
std::pair<CartesianState, OrbitalElements> perturb_absolute(const OrbitalElements& oe,
                                                            double sigma_r, double sigma_v,
                                                            double mu, RandomStream& rng,
                                                            int* resamples = nullptr);

/// Relative-navigation surrogate: the true dimensional ROE plus i.i.d.
/// Gaussian noise of standard deviation sigma_y on each component.
RoeState perturb_relative(const OrbitalElements& chief_mean, const OrbitalElements& deputy_mean,
                          double sigma_y, RandomStream& rng);

/// Thruster-misalignment surrogate: rotate the commanded vector by the
/// fixed angle zeta_pe about a uniformly random axis. Preserves the norm.
Eigen::Vector3d pointing_error(const Eigen::Vector3d& f, double zeta_pe, RandomStream& rng);

/// Magnitude clip preserving direction; safeguard mirror of the actuator.
Eigen::Vector3d saturate(const Eigen::Vector3d& f, double f_max);

/// Execute the full closed loop: at the start of each forced arc the noisy
/// navigation estimate is compared with the prediction of the profile in
/// use, the guidance is re-solved when they disagree by epsilon or more
/// (always at the first arc), and the commanded thrust — saturated,
/// misaligned, and rotated to inertial with the noisy chief state — is held
/// constant while the nonlinear truth dynamics advance both satellites.
/// A failed re-solve falls back to the remainder of the previous profile.
LoopTrace run_loop(const LoopConfig& config, const NoiseModel& noise,
                   const OrbitalElements& chief_osc, const OrbitalElements& deputy_osc);

/// Condensed per-run metrics for Monte Carlo campaigns.
struct LoopSummary {
    std::uint64_t seed = 0;
    Vector6d terminal_error = Vector6d::Zero();  // [m]
    double delta_v_total = 0.0;                  // [m/s]
    int resolve_count = 0;
    int fallback_count = 0;
    bool failed = false;                         // infeasible at start / propagation error
};

/// Independent loop runs over the given seeds; OpenMP fan-out when
/// parallel, bitwise identical to the serial path (results are stored by
/// seed index, never reduced in completion order).
std::vector<LoopSummary> run_monte_carlo(const LoopConfig& config, const NoiseModel& noise,
                                         const OrbitalElements& chief_osc,
                                         const OrbitalElements& deputy_osc,
                                         const std::vector<std::uint64_t>& seeds,
                                         bool parallel = true);

}  // namespace ltg
