#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "ltg/constants.hpp"

namespace ltg {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix63d = Eigen::Matrix<double, 6, 3>;

enum class ElementFlavor { Mean, Osculating };

/// Quasi-nonsingular absolute orbital elements (a, u, e_x, e_y, i, raan).
/// u is the mean argument of latitude, e_x/e_y the eccentricity vector.
struct OrbitalElements {
    double a = 0.0;      // semi-major axis [m]
    double u = 0.0;      // mean argument of latitude [rad]
    double ex = 0.0;     // e*cos(omega) [-]
    double ey = 0.0;     // e*sin(omega) [-]
    double i = 0.0;      // inclination [rad]
    double raan = 0.0;   // right ascension of ascending node [rad]
    ElementFlavor flavor = ElementFlavor::Osculating;

    double eccentricity() const { return std::sqrt(ex * ex + ey * ey); }

    /// Store all angles wrapped to [0, 2*pi).
    void normalize_angles() {
        u = wrap_two_pi(u);
        raan = wrap_two_pi(raan);
    }

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("OrbitalElements: a must be positive");
        if (!(eccentricity() < 1.0))
            throw std::invalid_argument("OrbitalElements: eccentricity must be < 1");
        if (i < 0.0 || i > kPi) throw std::invalid_argument("OrbitalElements: i out of [0, pi]");
    }
};

/// Inertial position/velocity pair.
struct CartesianState {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();  // [m]
    Eigen::Vector3d v = Eigen::Vector3d::Zero();  // [m/s]
};

/// Dimensional quasi-nonsingular relative orbital elements, all in meters.
struct RoeState {
    double da = 0.0;
    double dlambda = 0.0;
    double dex = 0.0;
    double dey = 0.0;
    double dix = 0.0;
    double diy = 0.0;

    Vector6d vec() const {
        Vector6d y;
        y << da, dlambda, dex, dey, dix, diy;
        return y;
    }
    static RoeState from_vec(const Vector6d& y) {
        return RoeState{y[0], y[1], y[2], y[3], y[4], y[5]};
    }
    double norm() const { return vec().norm(); }
};

/// Rotation from the chief's RTN frame to the inertial frame.
struct RtnFrame {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // columns: R, T, N axes

    Eigen::Vector3d to_inertial(const Eigen::Vector3d& f_rtn) const { return rotation * f_rtn; }
    Eigen::Vector3d to_rtn(const Eigen::Vector3d& f_inertial) const {
        return rotation.transpose() * f_inertial;
    }
};

}  // namespace ltg
