#include "ltg/astro.hpp"

#include <cmath>

namespace ltg {

namespace {

/// Solve Kepler's equation E - e*sin(E) = M by Newton iteration.
double eccentric_anomaly(double mean_anomaly, double e) {
    double E = (e < 0.8) ? mean_anomaly : kPi;
    for (int it = 0; it < 50; ++it) {
        const double f = E - e * std::sin(E) - mean_anomaly;
        const double fp = 1.0 - e * std::cos(E);
        const double dE = f / fp;
        E -= dE;
        if (std::abs(dE) < 1e-15) break;
    }
    return E;
}

}  // namespace

CartesianState oe_to_cartesian(const OrbitalElements& oe, double mu) {
    oe.validate();
    const double e = oe.eccentricity();
    const double omega = (e > 0.0) ? std::atan2(oe.ey, oe.ex) : 0.0;
    const double M = oe.u - omega;  // mean anomaly
    const double E = eccentric_anomaly(M, e);

    const double cosE = std::cos(E), sinE = std::sin(E);
    const double r_mag = oe.a * (1.0 - e * cosE);
    const double eta = std::sqrt(1.0 - e * e);
    // True anomaly from eccentric anomaly.
    const double nu = std::atan2(eta * sinE, cosE - e);
    const double theta = nu + omega;  // argument of latitude

    const double p = oe.a * eta * eta;
    const double h = std::sqrt(mu * p);

    // In-plane radial/transversal velocity components.
    const double vr = (mu / h) * e * std::sin(nu);
    const double vt = h / r_mag;

    const double cO = std::cos(oe.raan), sO = std::sin(oe.raan);
    const double ci = std::cos(oe.i), si = std::sin(oe.i);
    const double ct = std::cos(theta), st = std::sin(theta);

    // Unit vectors of the orbital plane expressed inertially.
    const Eigen::Vector3d ur(cO * ct - sO * st * ci, sO * ct + cO * st * ci, st * si);
    const Eigen::Vector3d ut(-cO * st - sO * ct * ci, -sO * st + cO * ct * ci, ct * si);

    CartesianState x;
    x.r = r_mag * ur;
    x.v = vr * ur + vt * ut;
    return x;
}

OrbitalElements cartesian_to_oe(const CartesianState& x, double mu) {
    const double r_mag = x.r.norm();
    if (r_mag <= 0.0) throw std::invalid_argument("cartesian_to_oe: zero position");
    const Eigen::Vector3d h = x.r.cross(x.v);
    const double h_mag = h.norm();
    if (h_mag <= 1e-3 * r_mag * x.v.norm() + 1e-12)
        throw std::invalid_argument("cartesian_to_oe: rectilinear orbit");

    const double energy = 0.5 * x.v.squaredNorm() - mu / r_mag;
    if (energy >= 0.0) throw std::invalid_argument("cartesian_to_oe: orbit is not bound");
    const double a = -mu / (2.0 * energy);

    const Eigen::Vector3d h_hat = h / h_mag;
    const double i = std::acos(std::clamp(h_hat.z(), -1.0, 1.0));

    // Ascending node; fall back to the inertial x axis for equatorial orbits.
    double raan = 0.0;
    if (h_hat.head<2>().norm() > 1e-15) raan = std::atan2(h.x(), -h.y());
    const Eigen::Vector3d n_hat(std::cos(raan), std::sin(raan), 0.0);
    const Eigen::Vector3d m_hat = h_hat.cross(n_hat);

    const Eigen::Vector3d e_vec = x.v.cross(h) / mu - x.r / r_mag;
    const double e = e_vec.norm();
    if (e >= 1.0) throw std::invalid_argument("cartesian_to_oe: eccentricity >= 1");

    const double theta = std::atan2(x.r.dot(m_hat), x.r.dot(n_hat));
    double omega = 0.0;
    if (e > 1e-14) omega = std::atan2(e_vec.dot(m_hat), e_vec.dot(n_hat));
    const double nu = theta - omega;

    const double eta = std::sqrt(1.0 - e * e);
    const double E = std::atan2(eta * std::sin(nu), e + std::cos(nu));
    const double M = E - e * std::sin(E);

    OrbitalElements oe;
    oe.a = a;
    oe.u = wrap_two_pi(M + omega);
    oe.ex = e * std::cos(omega);
    oe.ey = e * std::sin(omega);
    oe.i = i;
    oe.raan = wrap_two_pi(raan);
    oe.flavor = ElementFlavor::Osculating;
    return oe;
}

namespace {

/// First-order J2 short-period corrections (osculating minus mean) for a
/// near-circular orbit, expressed directly in the quasi-nonsingular set.
Vector6d short_period_correction(const OrbitalElements& oe, const EarthModel& earth) {
    const double g = 1.5 * earth.j2 * (earth.re / oe.a) * (earth.re / oe.a);
    const double s = std::sin(oe.i), c = std::cos(oe.i);
    const double s2 = s * s, c2 = c * c;
    const double u = oe.u;
    const double cu = std::cos(u), su = std::sin(u);
    const double c2u = std::cos(2.0 * u), s2u = std::sin(2.0 * u);
    const double c3u = std::cos(3.0 * u), s3u = std::sin(3.0 * u);

    // First-order-in-e pieces of e*cos(f) / e*sin(f) in nonsingular form.
    const double ecf = oe.ex * cu + oe.ey * su;
    const double esf = oe.ex * su - oe.ey * cu;

    Vector6d d;
    // Semi-major axis keeps its O(e) terms: they make the *differential*
    // mean a across a formation with eccentricity offsets accurate, which
    // the along-track drift integrates over time.
    d[0] = oe.a * g * (s2 * c2u + (2.0 - 3.0 * s2) * ecf + 3.0 * s2 * ecf * c2u -
                       4.0 * s2 * esf * s2u);                     // a
    d[1] = 0.5 * g * (1.5 * s2 - c2) * s2u;                       // u
    d[2] = g * ((1.0 - 1.25 * s2) * cu + (7.0 / 12.0) * s2 * c3u);  // e_x
    d[3] = g * ((1.0 - 1.75 * s2) * su + (7.0 / 12.0) * s2 * s3u);  // e_y
    d[4] = 0.5 * g * s * c * c2u;                                 // i
    d[5] = 0.5 * g * c * s2u;                                     // raan
    return d;
}

OrbitalElements apply_correction(const OrbitalElements& oe, const Vector6d& d, double sign) {
    OrbitalElements out = oe;
    out.a += sign * d[0];
    out.u += sign * d[1];
    out.ex += sign * d[2];
    out.ey += sign * d[3];
    out.i += sign * d[4];
    out.raan += sign * d[5];
    out.normalize_angles();
    return out;
}

}  // namespace

OrbitalElements osc_to_mean(const OrbitalElements& oe, const EarthModel& earth) {
    oe.validate();
    // Fixed-point inversion of mean -> osc; converges in a couple of passes
    // since the correction is O(J2).
    OrbitalElements mean = oe;
    for (int it = 0; it < 4; ++it) {
        mean = apply_correction(oe, short_period_correction(mean, earth), -1.0);
    }
    mean.flavor = ElementFlavor::Mean;
    return mean;
}

OrbitalElements mean_to_osc(const OrbitalElements& oe, const EarthModel& earth) {
    oe.validate();
    OrbitalElements osc = apply_correction(oe, short_period_correction(oe, earth), +1.0);
    osc.flavor = ElementFlavor::Osculating;
    return osc;
}

RoeState oe_to_roe(const OrbitalElements& chief, const OrbitalElements& deputy) {
    if (chief.flavor != deputy.flavor)
        throw std::invalid_argument("oe_to_roe: chief/deputy element flavor mismatch");
    const double ac = chief.a;
    const double du = wrap_pi(deputy.u - chief.u);
    const double draan = wrap_pi(deputy.raan - chief.raan);

    RoeState y;
    y.da = deputy.a - chief.a;
    y.dlambda = ac * wrap_pi(du + draan * std::cos(chief.i));
    y.dex = ac * (deputy.ex - chief.ex);
    y.dey = ac * (deputy.ey - chief.ey);
    y.dix = ac * (deputy.i - chief.i);
    y.diy = ac * draan * std::sin(chief.i);
    return y;
}

RtnFrame rtn_rotation(const CartesianState& chief_state) {
    const Eigen::Vector3d h = chief_state.r.cross(chief_state.v);
    const double r_mag = chief_state.r.norm();
    if (r_mag <= 0.0 || h.norm() <= 1e-9 * r_mag * chief_state.v.norm())
        throw std::invalid_argument("rtn_rotation: degenerate state");
    RtnFrame frame;
    const Eigen::Vector3d r_hat = chief_state.r / r_mag;
    const Eigen::Vector3d n_hat = h.normalized();
    frame.rotation.col(0) = r_hat;
    frame.rotation.col(1) = n_hat.cross(r_hat);
    frame.rotation.col(2) = n_hat;
    return frame;
}

}  // namespace ltg
