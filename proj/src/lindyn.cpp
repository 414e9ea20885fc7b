#include "ltg/lindyn.hpp"

#include <cmath>
#include <iostream>

namespace ltg {

namespace {

/// kappa = (3/4) J2 n (R_E/a)^2, the common J2 secular factor (eta ~ 1).
double j2_kappa(const OrbitalElements& chief, const EarthModel& earth) {
    const double n = mean_motion(chief.a, earth.mu);
    const double re_a = earth.re / chief.a;
    return 0.75 * earth.j2 * n * re_a * re_a;
}

void warn_if_eccentric(const OrbitalElements& chief) {
    static bool warned = false;
    if (!warned && chief.eccentricity() > 0.05) {
        std::cerr << "ltg: chief eccentricity " << chief.eccentricity()
                  << " exceeds the near-circular validity bound (0.05)\n";
        warned = true;
    }
}

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlPoints = 16;
constexpr double kGlNode[kGlPoints / 2] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[kGlPoints / 2] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

double mean_argument_latitude_rate(const OrbitalElements& chief_mean, const EarthModel& earth) {
    const double n = mean_motion(chief_mean.a, earth.mu);
    const double c = std::cos(chief_mean.i);
    return n + j2_kappa(chief_mean, earth) * (8.0 * c * c - 2.0);
}

double raan_rate(const OrbitalElements& chief_mean, const EarthModel& earth) {
    return -2.0 * j2_kappa(chief_mean, earth) * std::cos(chief_mean.i);
}

Matrix6d stm(const OrbitalElements& chief_mean, double t_start, double t_end,
             const EarthModel& earth) {
    if (t_end < t_start) throw std::invalid_argument("stm: t_end < t_start");
    warn_if_eccentric(chief_mean);
    const double tau = t_end - t_start;
    const double n = mean_motion(chief_mean.a, earth.mu);
    const double kappa = j2_kappa(chief_mean, earth);
    const double c = std::cos(chief_mean.i), s = std::sin(chief_mean.i);

    // Linearized secular rates of the dimensional ROE about the chief.
    const double dlam_da = -1.5 * n + 7.0 * kappa * (1.0 - 3.0 * c * c);
    const double dlam_dix = -14.0 * kappa * c * s;
    const double diy_da = 7.0 * kappa * c * s;
    const double diy_dix = 2.0 * kappa * s * s;
    const double omega_dot = kappa * (5.0 * c * c - 1.0);  // e-vector precession

    Matrix6d phi = Matrix6d::Identity();
    phi(1, 0) = dlam_da * tau;
    phi(1, 4) = dlam_dix * tau;
    phi(5, 0) = diy_da * tau;
    phi(5, 4) = diy_dix * tau;
    const double cw = std::cos(omega_dot * tau), sw = std::sin(omega_dot * tau);
    phi(2, 2) = cw;
    phi(2, 3) = -sw;
    phi(3, 2) = sw;
    phi(3, 3) = cw;
    return phi;
}

Matrix63d control_influence(const OrbitalElements& chief_mean, double t, const EarthModel& earth) {
    const double n = mean_motion(chief_mean.a, earth.mu);
    const double u = chief_mean.u + mean_argument_latitude_rate(chief_mean, earth) * t;
    const double cu = std::cos(u), su = std::sin(u);

    Matrix63d gamma = Matrix63d::Zero();
    gamma(0, 1) = 2.0;
    gamma(1, 0) = -2.0;
    gamma(2, 0) = su;
    gamma(2, 1) = 2.0 * cu;
    gamma(3, 0) = -cu;
    gamma(3, 1) = 2.0 * su;
    gamma(4, 2) = cu;
    gamma(5, 2) = su;
    return gamma / n;
}

Matrix63d convolution(const OrbitalElements& chief_mean, double t_start, double t_end,
                      const EarthModel& earth, int panels) {
    if (t_end < t_start) throw std::invalid_argument("convolution: t_end < t_start");
    if (panels < 1) throw std::invalid_argument("convolution: panels must be >= 1");
    Matrix63d psi = Matrix63d::Zero();
    const double span = (t_end - t_start) / panels;
    if (span <= 0.0) return psi;
    for (int p = 0; p < panels; ++p) {
        const double a = t_start + p * span;
        const double mid = a + 0.5 * span, half = 0.5 * span;
        for (int j = 0; j < kGlPoints / 2; ++j) {
            for (const double sgn : {-1.0, 1.0}) {
                const double tau = mid + sgn * half * kGlNode[j];
                psi += (kGlWeight[j] * half) * stm(chief_mean, tau, t_end, earth) *
                       control_influence(chief_mean, tau, earth);
            }
        }
    }
    return psi;
}

RoeState propagate_segment(const RoeState& y, const OrbitalElements& chief_mean, double t_start,
                           double t_end, const Eigen::Vector3d& f_rtn, double mass,
                           const EarthModel& earth) {
    if (!(mass > 0.0)) throw std::invalid_argument("propagate_segment: mass must be > 0");
    const Vector6d y1 = stm(chief_mean, t_start, t_end, earth) * y.vec() +
                        convolution(chief_mean, t_start, t_end, earth) * (f_rtn / mass);
    return RoeState::from_vec(y1);
}

std::vector<StmPair> grid_stms(const TimeGrid& grid, const EarthModel& earth) {
    std::vector<StmPair> out(grid.num_arcs());
    const double epoch = grid.t0();
    for (std::size_t k = 0; k < grid.num_arcs(); ++k) {
        const double a = grid.instants[k] - epoch;
        const double b = grid.instants[k + 1] - epoch;
        out[k].phi = stm(grid.chief_epoch_elements, a, b, earth);
        out[k].psi = grid.is_forced(k) ? convolution(grid.chief_epoch_elements, a, b, earth)
                                       : Matrix63d::Zero();
    }
    return out;
}

}  // namespace ltg
