#include "ltg/truth_sim.hpp"

#include <cmath>

namespace ltg {

Eigen::Vector3d gravity_acceleration(const Eigen::Vector3d& r, const PropagationConfig& config) {
    const double r2 = r.squaredNorm();
    const double r_mag = std::sqrt(r2);
    Eigen::Vector3d a = -config.earth.mu / (r2 * r_mag) * r;
    if (config.j2_enabled) {
        const double z2_r2 = r.z() * r.z() / r2;
        const double k = -1.5 * config.earth.j2 * config.earth.mu * config.earth.re *
                         config.earth.re / (r2 * r2 * r_mag);
        a.x() += k * r.x() * (1.0 - 5.0 * z2_r2);
        a.y() += k * r.y() * (1.0 - 5.0 * z2_r2);
        a.z() += k * r.z() * (3.0 - 5.0 * z2_r2);
    }
    return a;
}

namespace {

using State6 = Eigen::Matrix<double, 6, 1>;

State6 dynamics(const State6& s, const Eigen::Vector3d& accel_thrust,
                const PropagationConfig& config) {
    State6 ds;
    ds.head<3>() = s.tail<3>();
    ds.tail<3>() = gravity_acceleration(s.head<3>(), config) + accel_thrust;
    return ds;
}

double specific_energy(const State6& s, double mu) {
    return 0.5 * s.tail<3>().squaredNorm() - mu / s.head<3>().norm();
}

}  // namespace

CartesianState propagate(const CartesianState& x, const Eigen::Vector3d& thrust_inertial,
                         double mass, double dt, const PropagationConfig& config) {
    config.validate();
    if (dt < 0.0) throw std::invalid_argument("propagate: dt must be >= 0");
    if (!(mass > 0.0)) throw std::invalid_argument("propagate: mass must be > 0");

    const Eigen::Vector3d accel = thrust_inertial / mass;
    State6 s;
    s << x.r, x.v;
    const double e0 = specific_energy(s, config.earth.mu);

    double t = 0.0;
    while (t < dt - 1e-12) {
        const double h = std::min(config.step, dt - t);
        const State6 k1 = dynamics(s, accel, config);
        const State6 k2 = dynamics(s + 0.5 * h * k1, accel, config);
        const State6 k3 = dynamics(s + 0.5 * h * k2, accel, config);
        const State6 k4 = dynamics(s + h * k3, accel, config);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }

    // Energy-drift guard for unforced Keplerian arcs; J2 and thrust both
    // exchange energy legitimately, so the guard only applies without them.
    if (!config.j2_enabled && thrust_inertial.norm() == 0.0 && dt > 0.0) {
        const double e1 = specific_energy(s, config.earth.mu);
        if (std::abs(e1 - e0) > 1e-6 * std::abs(e0))
            throw std::runtime_error("propagate: energy drift detected, step too large");
    }

    CartesianState out;
    out.r = s.head<3>();
    out.v = s.tail<3>();
    return out;
}

RoeState mean_roe_between(const CartesianState& chief, const CartesianState& deputy,
                          const PropagationConfig& config) {
    EarthModel earth = config.earth;
    if (!config.j2_enabled) earth.j2 = 0.0;
    const OrbitalElements chief_mean = osc_to_mean(cartesian_to_oe(chief, earth.mu), earth);
    const OrbitalElements deputy_mean = osc_to_mean(cartesian_to_oe(deputy, earth.mu), earth);
    return oe_to_roe(chief_mean, deputy_mean);
}

}  // namespace ltg
