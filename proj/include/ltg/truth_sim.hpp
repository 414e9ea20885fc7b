#pragma once

#include "ltg/astro.hpp"
#include "ltg/elements.hpp"

namespace ltg {

/// Fixed-step propagation setup for the nonlinear truth dynamics.
struct PropagationConfig {
    double step = 10.0;   // integrator step [s]
    bool j2_enabled = true;
    EarthModel earth{};

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("PropagationConfig: step must be > 0");
    }
};

/// Two-body + J2 acceleration at an inertial position [m/s^2].
Eigen::Vector3d gravity_acceleration(const Eigen::Vector3d& r, const PropagationConfig& config);

/// Propagate a Cartesian state over dt with a thrust held constant in the
/// inertial frame. Classic RK4 with the configured fixed step; an
/// energy-drift guard rejects unstable step sizes.
CartesianState propagate(const CartesianState& x, const Eigen::Vector3d& thrust_inertial,
                         double mass, double dt, const PropagationConfig& config);

/// Ground-truth mean ROE: Cartesian -> osculating -> mean -> ROE.
RoeState mean_roe_between(const CartesianState& chief, const CartesianState& deputy,
                          const PropagationConfig& config);

}  // namespace ltg
