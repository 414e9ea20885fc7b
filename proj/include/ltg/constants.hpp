#pragma once

#include <cmath>

namespace ltg {

/// Central-body gravity model (WGS-84 / EGM values by default).
struct EarthModel {
    double mu = 3.986004418e14;  // gravitational parameter [m^3/s^2]
    double re = 6378137.0;       // equatorial radius [m]
    double j2 = 1.08263e-3;      // second zonal harmonic [-]
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wrap an angle to [0, 2*pi).
inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

/// Wrap an angle to (-pi, pi].
inline double wrap_pi(double angle) {
    double w = std::fmod(angle + kPi, kTwoPi);
    if (w <= 0.0) w += kTwoPi;
    return w - kPi;
}

/// Mean motion of a Keplerian orbit [rad/s].
inline double mean_motion(double a, double mu) { return std::sqrt(mu / (a * a * a)); }

/// Orbital period [s].
inline double orbit_period(double a, double mu) { return kTwoPi / mean_motion(a, mu); }

}  // namespace ltg
