#pragma once

#include "ltg/elements.hpp"

namespace ltg {

/// Map quasi-nonsingular elements to an inertial Cartesian state.
/// Rejects e >= 1; the round trip through cartesian_to_oe recovers the
/// input to better than 1e-9 relative for bound orbits.
CartesianState oe_to_cartesian(const OrbitalElements& oe, double mu);

/// Inverse of oe_to_cartesian. Output flavor is osculating.
/// Rejects degenerate (rectilinear or unbound) states.
OrbitalElements cartesian_to_oe(const CartesianState& x, double mu);

/// Remove the first-order J2 short-period oscillations (Brouwer-style,
/// quasi-nonsingular variables, near-circular expansion).
OrbitalElements osc_to_mean(const OrbitalElements& oe, const EarthModel& earth);

/// Add the first-order J2 short-period oscillations back.
OrbitalElements mean_to_osc(const OrbitalElements& oe, const EarthModel& earth);

/// Dimensional quasi-nonsingular ROE of the deputy relative to the chief.
/// Both inputs must share the flavor of the chief (mean for guidance use);
/// dlambda is wrapped to (-pi*a_c, pi*a_c].
RoeState oe_to_roe(const OrbitalElements& chief, const OrbitalElements& deputy);

/// RTN axes of the orbit through the given state: R along the position,
/// N along the orbital momentum, T completing the right-handed triad.
RtnFrame rtn_rotation(const CartesianState& chief_state);

}  // namespace ltg
