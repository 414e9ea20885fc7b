#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ltg/truth_sim.hpp"

using namespace ltg;

namespace {

OrbitalElements make_oe(double a, double u, double ex, double ey, double i, double raan,
                        ElementFlavor flavor = ElementFlavor::Osculating) {
    OrbitalElements oe;
    oe.a = a;
    oe.u = u;
    oe.ex = ex;
    oe.ey = ey;
    oe.i = i;
    oe.raan = raan;
    oe.flavor = flavor;
    return oe;
}

}  // namespace

TEST_CASE("Keplerian propagation returns to the start after one period") {
    PropagationConfig config;
    config.j2_enabled = false;
    const auto oe = make_oe(6950e3, 0.3, 0.001, -0.002, deg2rad(97.0), 1.0);
    const CartesianState x0 = oe_to_cartesian(oe, config.earth.mu);
    const double period = orbit_period(oe.a, config.earth.mu);
    const CartesianState x1 =
        propagate(x0, Eigen::Vector3d::Zero(), 200.0, period, config);
    CHECK((x1.r - x0.r).norm() < 1.0);
    CHECK((x1.v - x0.v).norm() < 1e-3);
}

TEST_CASE("Keplerian invariants hold over several orbits") {
    PropagationConfig config;
    config.j2_enabled = false;
    const auto oe = make_oe(7100e3, 2.0, 0.01, 0.004, deg2rad(51.6), 0.2);
    const CartesianState x0 = oe_to_cartesian(oe, config.earth.mu);
    const double period = orbit_period(oe.a, config.earth.mu);
    const CartesianState x1 =
        propagate(x0, Eigen::Vector3d::Zero(), 200.0, 5.0 * period, config);
    const double e0 = 0.5 * x0.v.squaredNorm() - config.earth.mu / x0.r.norm();
    const double e1 = 0.5 * x1.v.squaredNorm() - config.earth.mu / x1.r.norm();
    CHECK(std::abs(e1 - e0) < 1e-8 * std::abs(e0));
    CHECK((x1.r.cross(x1.v) - x0.r.cross(x0.v)).norm() < 1e-6 * x0.r.cross(x0.v).norm());
}

TEST_CASE("energy guard rejects an unstable step size") {
    PropagationConfig config;
    config.j2_enabled = false;
    config.step = 2000.0;
    const auto oe = make_oe(6950e3, 0.0, 0.0, 0.0, 1.0, 0.0);
    const CartesianState x0 = oe_to_cartesian(oe, config.earth.mu);
    CHECK_THROWS_AS(propagate(x0, Eigen::Vector3d::Zero(), 200.0, 20000.0, config),
                    std::runtime_error);
}

TEST_CASE("oblateness drives the node at the secular rate") {
    PropagationConfig config;
    const auto osc0 = make_oe(6950e3, 0.0, 0.0, 0.0, deg2rad(97.7), 1.0);
    const OrbitalElements mean0 = osc_to_mean(osc0, config.earth);
    const double period = orbit_period(mean0.a, config.earth.mu);
    const double horizon = 10.0 * period;
    const CartesianState x0 = oe_to_cartesian(osc0, config.earth.mu);
    const CartesianState x1 = propagate(x0, Eigen::Vector3d::Zero(), 200.0, horizon, config);
    const OrbitalElements mean1 = osc_to_mean(cartesian_to_oe(x1, config.earth.mu), config.earth);

    const double n = mean_motion(mean0.a, config.earth.mu);
    const double re_a = config.earth.re / mean0.a;
    const double rate = -1.5 * config.earth.j2 * n * re_a * re_a * std::cos(mean0.i);
    const double drift = wrap_pi(mean1.raan - mean0.raan);
    CHECK(drift == doctest::Approx(rate * horizon).epsilon(0.02));
    CHECK(std::abs(drift) > 1e-3);  // the effect itself is well resolved
    // Mean a and i carry no secular J2 drift.
    CHECK(std::abs(mean1.a - mean0.a) < 5.0);
    CHECK(std::abs(mean1.i - mean0.i) < 1e-5);
}

TEST_CASE("constant thrust changes velocity by f/m * dt to first order") {
    PropagationConfig config;
    const auto oe = make_oe(6950e3, 0.5, 0.0, 0.0, deg2rad(97.0), 0.0);
    const CartesianState x0 = oe_to_cartesian(oe, config.earth.mu);
    const Eigen::Vector3d f(3e-3, -2e-3, 4e-3);
    const double mass = 200.0, dt = 10.0;
    const CartesianState free = propagate(x0, Eigen::Vector3d::Zero(), mass, dt, config);
    const CartesianState pushed = propagate(x0, f, mass, dt, config);
    const Eigen::Vector3d dv = pushed.v - free.v;
    // The two trajectories diverge slightly, so gravity along them differs
    // at second order; allow that much.
    CHECK((dv - f / mass * dt).norm() < 1e-4 * dv.norm());
}

TEST_CASE("mean relative elements reduce to osculating ones without J2") {
    PropagationConfig config;
    config.j2_enabled = false;
    const auto chief = make_oe(6950e3, 1.0, 0.001, 0.0, deg2rad(97.0), 0.5);
    auto deputy = chief;
    deputy.a += 150.0;
    deputy.u += 500.0 / chief.a;
    deputy.i += 80.0 / chief.a;
    const CartesianState xc = oe_to_cartesian(chief, config.earth.mu);
    const CartesianState xd = oe_to_cartesian(deputy, config.earth.mu);
    const RoeState got = mean_roe_between(xc, xd, config);
    const RoeState osc = oe_to_roe(chief, deputy);
    CHECK((got.vec() - osc.vec()).norm() < 1e-6);
}

TEST_CASE("mean relative elements recover a constructed separation") {
    PropagationConfig config;
    const auto chief_mean = make_oe(6950e3, 2.2, 0.0005, -0.001, deg2rad(97.7), 0.9,
                                    ElementFlavor::Mean);
    RoeState want;
    want.da = 187.0;
    want.dlambda = 945.0;
    want.dex = 189.0;
    want.dey = 86.0;
    want.dix = 79.0;
    want.diy = -114.0;
    OrbitalElements deputy_mean = chief_mean;
    deputy_mean.a += want.da;
    deputy_mean.ex += want.dex / chief_mean.a;
    deputy_mean.ey += want.dey / chief_mean.a;
    deputy_mean.i += want.dix / chief_mean.a;
    deputy_mean.raan += want.diy / chief_mean.a / std::sin(chief_mean.i);
    deputy_mean.u += want.dlambda / chief_mean.a -
                     (deputy_mean.raan - chief_mean.raan) * std::cos(chief_mean.i);

    const CartesianState xc =
        oe_to_cartesian(mean_to_osc(chief_mean, config.earth), config.earth.mu);
    const CartesianState xd =
        oe_to_cartesian(mean_to_osc(deputy_mean, config.earth), config.earth.mu);
    const RoeState got = mean_roe_between(xc, xd, config);
    CHECK((got.vec() - want.vec()).norm() < 1e-3);
}
