// Times the OpenMP fan-out of the sweep and Monte Carlo kernels against
// their serial reference paths and verifies the results are bitwise
// identical.

#include <chrono>
#include <cstdio>

#include "ltg/astro.hpp"
#include "ltg/scenario.hpp"
#include "ltg/sweep.hpp"

using namespace ltg;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* kLoopScenario = R"(kind = simulate
chief_a_km = 6828
chief_i_deg = 78
y0_m = 0, 0, 273, 0, 10, 70
yf_m = 0, 0, 273, 0, 200, 90
horizon_orbits = 3
tf_orbits = 0.3
mass_kg = 200
f_max_mn = 7
sigma_r_chief_m = 10
sigma_v_chief_ms = 0.5
sigma_r_deputy_m = 10
sigma_v_deputy_ms = 0.5
sigma_y_m = 1
zeta_pe_arcsec = 25
)";

}  // namespace

int main() {
    int mismatches = 0;

    {
        SweepConfig config;
        config.tf_orbits = {0.1, 0.2, 0.3, 0.4};
        config.tn_seconds = {60.0, 120.0, 180.0};
        config.samples_per_cell = 4;
        config.y0_lower = Vector6d::Constant(-500.0);
        config.y0_upper = Vector6d::Constant(500.0);
        config.horizon_orbits = 5.0;
        config.chief_mean.a = 7121e3;
        config.chief_mean.ex = 1e-5;
        config.chief_mean.i = deg2rad(45.0);
        config.chief_mean.flavor = ElementFlavor::Mean;

        auto t0 = std::chrono::steady_clock::now();
        const SweepResult par = run_sweep(config, true);
        const double t_par = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const SweepResult ser = run_sweep(config, false);
        const double t_ser = seconds_since(t0);

        for (std::size_t i = 0; i < par.cells.size(); ++i)
            if (par.cells[i].mean_cost != ser.cells[i].mean_cost ||
                par.cells[i].solved != ser.cells[i].solved)
                ++mismatches;
        std::printf("sweep      (%zu cells x %d samples): parallel %.2fs, serial %.2fs, "
                    "speedup %.2fx\n",
                    par.cells.size(), config.samples_per_cell, t_par, t_ser, t_ser / t_par);
    }

    {
        const Scenario s = parse_scenario_text(kLoopScenario);
        const LoopConfig config = make_loop_config(s);
        const NoiseModel noise = make_noise_model(s);
        const OrbitalElements chief = scenario_chief_osc(s);
        const OrbitalElements deputy = deputy_initial_osc(s);
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t i = 1; i <= 8; ++i) seeds.push_back(i);

        auto t0 = std::chrono::steady_clock::now();
        const auto par = run_monte_carlo(config, noise, chief, deputy, seeds, true);
        const double t_par = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto ser = run_monte_carlo(config, noise, chief, deputy, seeds, false);
        const double t_ser = seconds_since(t0);

        for (std::size_t i = 0; i < par.size(); ++i)
            if (par[i].delta_v_total != ser[i].delta_v_total ||
                (par[i].terminal_error - ser[i].terminal_error).norm() != 0.0)
                ++mismatches;
        std::printf("monte carlo (%zu seeds): parallel %.2fs, serial %.2fs, speedup %.2fx\n",
                    par.size(), t_par, t_ser, t_ser / t_par);
    }

    if (mismatches) {
        std::printf("FAIL: %d parallel/serial mismatches\n", mismatches);
        return 1;
    }
    std::printf("parallel results bitwise identical to serial reference\n");
    return 0;
}
