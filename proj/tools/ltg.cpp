// Command-line front end: solve a guidance scenario, fly it closed loop,
// run the (Tf, Tn) tuning sweep, or reproduce the published closed-loop
// benchmark statistics.
//
// Exit codes: 0 success, 2 scenario/argument parse error, 3 guidance
// infeasible, 4 solver failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "ltg/astro.hpp"
#include "ltg/scenario.hpp"

using namespace ltg;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_guide(const std::string& scenario_path, const std::string& out_path) {
    const Scenario s = parse_scenario_file(scenario_path);
    const GuidanceSpec spec = make_guidance_spec(s);
    const GuidancePlan plan = solve_guidance(spec, SolverSettings{});
    const double period = orbit_period(spec.grid.chief_epoch_elements.a, spec.earth.mu);
    write_output(out_path, profile_csv(plan, period, spec.mass));
    std::cerr << summary_text(plan, spec.yf);
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_path,
                 std::uint64_t seed_override, bool has_seed) {
    Scenario s = parse_scenario_file(scenario_path);
    if (s.kind != ScenarioKind::Simulate)
        std::cerr << "note: scenario kind is 'guide'; flying it closed loop anyway\n";
    if (has_seed) s.seed = seed_override;
    const LoopConfig config = make_loop_config(s);
    const LoopTrace trace = run_loop(config, make_noise_model(s), scenario_chief_osc(s),
                                     deputy_initial_osc(s));
    const double period =
        orbit_period(config.spec.grid.chief_epoch_elements.a, config.spec.earth.mu);
    write_output(out_path, profile_csv(trace, period, config.spec.mass));
    std::cerr << summary_text(trace);
    return 0;
}

SweepConfig reference_sweep_config(bool fast, std::uint64_t seed) {
    SweepConfig config;
    config.tf_orbits = reference_tf_grid();
    config.tn_seconds = reference_tn_grid();
    config.samples_per_cell = fast ? 10 : 100;
    config.y0_lower << -1000, -100e3, -1000, -1000, -1000, -1000;
    config.y0_upper << 1000, 100e3, 1000, 1000, 1000, 1000;
    config.horizon_orbits = 15.0;
    config.chief_mean.a = 7121e3;
    config.chief_mean.ex = 1e-5;
    config.chief_mean.i = deg2rad(45.0);
    config.chief_mean.flavor = ElementFlavor::Mean;
    config.rng_seed = seed;
    return config;
}

int run_sweep_cmd(const std::string& out_path, bool fast, std::uint64_t seed) {
    const SweepConfig config = reference_sweep_config(fast, seed);
    const SweepResult result = run_sweep(config);
    write_output(out_path, sweep_csv(result));
    int successes = 0;
    for (const CellResult& c : result.cells) successes += c.success ? 1 : 0;
    std::cerr << "cells = " << result.cells.size() << "\n"
              << "success_cells = " << successes << "\n";
    return 0;
}

// Embedded copy of scenarios/closed_loop_benchmark.scn so the command works
// from any directory.
const char* kBenchmarkScenario = R"(kind = simulate
chief_a_km = 6828
chief_i_deg = 78
y0_m = 0, 0, 273, 0, 10, 70
yf_m = 0, 0, 273, 0, 400, 120
horizon_orbits = 7
tf_orbits = 0.3, 0.1
tf_until_orbits = 6, 7
mass_kg = 200
f_max_mn = 7
epsilon_m = 5
sigma_r_chief_m = 10
sigma_v_chief_ms = 0.5
sigma_r_deputy_m = 10
sigma_v_deputy_ms = 0.5
sigma_y_m = 1
zeta_pe_arcsec = 25
)";

int run_benchmark(int num_seeds) {
    const Scenario s = parse_scenario_text(kBenchmarkScenario);
    const LoopConfig config = make_loop_config(s);
    const NoiseModel noise = make_noise_model(s);
    const OrbitalElements chief = scenario_chief_osc(s);
    const OrbitalElements deputy = deputy_initial_osc(s);

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(num_seeds));
    for (int i = 0; i < num_seeds; ++i) seeds[static_cast<std::size_t>(i)] = i + 1;
    const std::vector<LoopSummary> runs = run_monte_carlo(config, noise, chief, deputy, seeds);

    std::vector<double> dv;
    std::array<std::vector<double>, 6> err;
    int failures = 0;
    for (const LoopSummary& r : runs) {
        if (r.failed) {
            ++failures;
            continue;
        }
        dv.push_back(r.delta_v_total);
        for (int j = 0; j < 6; ++j) err[j].push_back(r.terminal_error[j]);
    }
    if (dv.empty()) {
        std::cerr << "benchmark: every run failed\n";
        return kExitSolver;
    }

    const char* labels[6] = {"da", "dlambda", "dex", "dey", "dix", "diy"};
    // Published results for the same maneuver: the unidirectional-thruster
    // formulation this library implements, and the standard bidirectional
    // reference it was compared against.
    const double published_uni[6] = {-0.6, -0.1, 0.7, 1.1, -0.3, 0.3};
    const double published_bi[6] = {3.6, -9.2, 1.4, -2.0, 2.9, -1.6};

    std::printf("runs = %zu (failed %d)\n", runs.size(), failures);
    std::printf("%-10s %14s %14s %14s\n", "median", "this library", "published uni",
                "published bi");
    for (int j = 0; j < 6; ++j)
        std::printf("%-10s %14.2f %14.2f %14.2f\n", labels[j], median(err[j]),
                    published_uni[j], published_bi[j]);
    std::printf("%-10s %14.3f %14.3f %14.3f\n", "dv_ms", median(dv), 0.65, 0.5);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-thrust formation guidance"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool fast = false;
    int num_seeds = 20;

    CLI::App* guide = app.add_subcommand("guide", "solve a guidance scenario");
    guide->add_option("--scenario", scenario_path, "scenario file")->required();
    guide->add_option("--out", out_path, "profile CSV path ('-' for stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "fly a scenario closed loop");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--out", out_path, "profile CSV path ('-' for stdout)");
    CLI::Option* seed_opt = simulate->add_option("--seed", seed, "override the scenario seed");

    CLI::App* sweep = app.add_subcommand("sweep", "run the built-in (Tf, Tn) tuning campaign");
    sweep->add_option("--out", out_path, "sweep CSV path ('-' for stdout)");
    sweep->add_flag("--fast", fast, "10 samples per cell instead of 100");
    sweep->add_option("--seed", seed, "campaign seed");

    CLI::App* benchmark =
        app.add_subcommand("benchmark", "closed-loop statistics vs the published results");
    benchmark->add_option("--seeds", num_seeds, "number of Monte Carlo seeds")
        ->check(CLI::PositiveNumber);
    benchmark->add_flag("--fast", fast, "use 5 seeds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitParse;
    }

    try {
        if (guide->parsed()) return run_guide(scenario_path, out_path);
        if (simulate->parsed())
            return run_simulate(scenario_path, out_path, seed, seed_opt->count() > 0);
        if (sweep->parsed()) return run_sweep_cmd(out_path, fast, seed);
        if (benchmark->parsed()) return run_benchmark(fast ? 5 : num_seeds);
    } catch (const ScenarioParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const GuidanceInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InfeasibleAtStart& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const GuidanceSolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
