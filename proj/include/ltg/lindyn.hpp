#pragma once

#include <vector>

#include "ltg/elements.hpp"
#include "ltg/time_grid.hpp"

namespace ltg {

/// State transition and control convolution matrices over one arc.
struct StmPair {
    Matrix6d phi = Matrix6d::Identity();   // maps meters -> meters
    Matrix63d psi = Matrix63d::Zero();     // maps m/s^2 -> m over the arc
};

/// Secular drift rate of the chief's mean argument of latitude [rad/s],
/// Keplerian mean motion plus the J2 contribution.
double mean_argument_latitude_rate(const OrbitalElements& chief_mean, const EarthModel& earth);

/// Secular nodal drift rate of the chief [rad/s].
double raan_rate(const OrbitalElements& chief_mean, const EarthModel& earth);

/// STM of the dimensional mean ROE over [t_start, t_end] under Keplerian +
/// J2-secular relative dynamics, linearized about a near-circular chief.
/// `chief_mean` holds the chief's mean elements (epoch irrelevant: the
/// secular rates depend only on a, e, i).
Matrix6d stm(const OrbitalElements& chief_mean, double t_start, double t_end,
             const EarthModel& earth);

/// Control influence Gamma(u_c(t)): RTN acceleration [m/s^2] to dimensional
/// ROE rates [m/s]. `chief_mean` is the chief's mean state at t = 0 of the
/// clock on which t is measured.
Matrix63d control_influence(const OrbitalElements& chief_mean, double t, const EarthModel& earth);

/// Convolution matrix Psi = integral of Phi(tau -> t_end) * Gamma(tau) over
/// the arc, by 16-node Gauss-Legendre quadrature per panel.
Matrix63d convolution(const OrbitalElements& chief_mean, double t_start, double t_end,
                      const EarthModel& earth, int panels = 1);

/// One step of the linear model: y(t_end) = Phi y(t_start) + Psi f/M.
/// Thrust is constant in RTN over the arc, in newtons.
RoeState propagate_segment(const RoeState& y, const OrbitalElements& chief_mean, double t_start,
                           double t_end, const Eigen::Vector3d& f_rtn, double mass,
                           const EarthModel& earth);

/// Per-arc STM/convolution pairs for a whole grid (times measured from the
/// grid epoch, chief taken from the grid).
std::vector<StmPair> grid_stms(const TimeGrid& grid, const EarthModel& earth);

}  // namespace ltg
