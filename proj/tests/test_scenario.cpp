#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ltg/astro.hpp"
#include "ltg/scenario.hpp"

using namespace ltg;

namespace {

const char* kRendezvousText = R"(# five-orbit rendezvous to the chief
kind = guide
chief_a_km = 7121
chief_i_deg = 45
chief_ex = 1e-5
y0_m = -55.6, 7414.7, -58.7, 83.7, -2.3, 22.4
yf_m = 0, 0, 0, 0, 0, 0
horizon_orbits = 5
tf_orbits = 0.3
mass_kg = 200
f_max_mn = 7
)";

Scenario rendezvous() { return parse_scenario_text(kRendezvousText); }

}  // namespace

TEST_CASE("parsing fills defaults and applies the slew rule for the coast length") {
    const Scenario s = rendezvous();
    CHECK(s.kind == ScenarioKind::Guide);
    CHECK(s.chief_a_km == 7121.0);
    CHECK(s.chief_i_deg == 45.0);
    CHECK(s.chief_ex == 1e-5);
    CHECK(s.chief_ey == 0.0);
    CHECK(s.chief_u_deg == 0.0);
    CHECK(s.y0.dlambda == doctest::Approx(7414.7));
    CHECK(s.yf.vec().norm() == 0.0);
    CHECK(s.horizon_orbits == 5.0);
    REQUIRE(s.tf_orbits.size() == 1);
    CHECK(s.tf_orbits[0] == 0.3);
    CHECK(s.tf_until_orbits.empty());
    CHECK_FALSE(s.tn_seconds.has_value());
    CHECK(s.windows_orbits.empty());

    // Documented defaults.
    CHECK(s.n_dir == 12);
    CHECK(s.gamma_first_deg == 0.0);
    CHECK(s.omega_max_deg_s == 2.0);
    CHECK(s.t_safety_s == 10.0);
    CHECK(s.epsilon_m == 5.0);
    CHECK(s.seed == 1);

    // Half-turn at 2 deg/s plus a 10 s margin.
    CHECK(scenario_tn(s) == doctest::Approx(100.0).epsilon(1e-12));

    Scenario explicit_tn = s;
    explicit_tn.tn_seconds = 150.0;
    CHECK(scenario_tn(explicit_tn) == 150.0);
}

TEST_CASE("serialize and parse round-trip") {
    Scenario s = rendezvous();
    s.kind = ScenarioKind::Simulate;
    s.tn_seconds = 123.5;
    s.sigma_r_chief_m = 10.0;
    s.sigma_v_chief_ms = 0.5;
    s.sigma_y_m = 1.0;
    s.zeta_pe_arcsec = 25.0;
    s.seed = 42;
    s.gamma_first_deg = 45.0;
    s.windows_orbits = {{0.5, 1.0}, {1.5, 2.0}};

    const Scenario t = parse_scenario_text(serialize_scenario(s));
    CHECK(t.kind == s.kind);
    CHECK(t.chief_a_km == s.chief_a_km);
    CHECK(t.chief_ex == s.chief_ex);
    CHECK((t.y0.vec() - s.y0.vec()).norm() == 0.0);
    CHECK((t.yf.vec() - s.yf.vec()).norm() == 0.0);
    CHECK(t.tf_orbits == s.tf_orbits);
    REQUIRE(t.tn_seconds.has_value());
    CHECK(*t.tn_seconds == *s.tn_seconds);
    REQUIRE(t.windows_orbits.size() == 2);
    CHECK(t.windows_orbits[1].start == 1.5);
    CHECK(t.gamma_first_deg == s.gamma_first_deg);
    CHECK(t.sigma_r_chief_m == s.sigma_r_chief_m);
    CHECK(t.zeta_pe_arcsec == s.zeta_pe_arcsec);
    CHECK(t.seed == s.seed);
    CHECK(serialize_scenario(t) == serialize_scenario(s));
}

TEST_CASE("malformed scenarios are rejected with line numbers") {
    SUBCASE("unknown key") {
        try {
            parse_scenario_text(std::string(kRendezvousText) + "warp_factor = 9\n");
            FAIL("expected throw");
        } catch (const ScenarioParseError& e) {
            CHECK(e.key == "warp_factor");
            CHECK(e.line == 12);
        }
    }
    SUBCASE("duplicate key") {
        try {
            parse_scenario_text(std::string(kRendezvousText) + "mass_kg = 100\n");
            FAIL("expected throw");
        } catch (const ScenarioParseError& e) {
            CHECK(e.key == "mass_kg");
            CHECK(e.line == 12);
        }
    }
    SUBCASE("missing equals sign") {
        CHECK_THROWS_AS(parse_scenario_text("kind guide\n"), ScenarioParseError);
    }
    SUBCASE("missing required key") {
        try {
            parse_scenario_text("kind = guide\n");
            FAIL("expected throw");
        } catch (const ScenarioParseError& e) {
            CHECK(e.key == "chief_a_km");
        }
    }
    SUBCASE("non-numeric value") {
        std::string text = kRendezvousText;
        text.replace(text.find("7121"), 4, "many");
        CHECK_THROWS_AS(parse_scenario_text(text), ScenarioParseError);
    }
    SUBCASE("bad kind") {
        std::string text = kRendezvousText;
        text.replace(text.find("guide"), 5, "elope");
        CHECK_THROWS_AS(parse_scenario_text(text), ScenarioParseError);
    }
    SUBCASE("wrong ROE arity") {
        std::string text = kRendezvousText;
        text.replace(text.find("0, 0, 0, 0, 0, 0"), 16, "0, 0, 0");
        CHECK_THROWS_AS(parse_scenario_text(text), ScenarioParseError);
    }
    SUBCASE("segment lengths without segment ends") {
        std::string text = kRendezvousText;
        text.replace(text.find("tf_orbits = 0.3"), 15, "tf_orbits = 0.3, 0.1");
        CHECK_THROWS_AS(parse_scenario_text(text), ScenarioParseError);
    }
    SUBCASE("nonexistent file") {
        CHECK_THROWS_AS(parse_scenario_file("/nonexistent/path.scn"), ScenarioParseError);
    }
}

TEST_CASE("guidance spec assembly converts units and builds the grid") {
    const Scenario s = rendezvous();
    const GuidanceSpec spec = make_guidance_spec(s);

    CHECK(spec.f_max == doctest::Approx(7e-3).epsilon(1e-12));
    CHECK(spec.mass == 200.0);
    CHECK(spec.n_dir == 12);
    CHECK((spec.y0.vec() - s.y0.vec()).norm() == 0.0);

    const double period = orbit_period(spec.grid.chief_epoch_elements.a, spec.earth.mu);
    CHECK(spec.grid.instants.back() == doctest::Approx(5.0 * period).epsilon(1e-9));
    for (std::size_t k = 0; k < spec.grid.num_arcs(); ++k) {
        const double dt = spec.grid.instants[k + 1] - spec.grid.instants[k];
        if (spec.grid.is_forced(k))
            CHECK(dt <= 0.3 * period * (1 + 1e-9));
        else
            CHECK(dt >= 100.0 * (1 - 1e-9));
    }

    // The chief epoch elements are the mean counterparts of the file's
    // osculating set.
    const OrbitalElements osc = scenario_chief_osc(s);
    CHECK(osc.a == 7121e3);
    CHECK(spec.grid.chief_epoch_elements.flavor == ElementFlavor::Mean);
}

TEST_CASE("deputy initial elements realize the scenario's initial ROE") {
    const Scenario s = rendezvous();
    const OrbitalElements dep_osc = deputy_initial_osc(s);
    const EarthModel earth{};
    const OrbitalElements chief_mean = osc_to_mean(scenario_chief_osc(s), earth);
    const OrbitalElements dep_mean = osc_to_mean(dep_osc, earth);
    const RoeState y = oe_to_roe(chief_mean, dep_mean);
    CHECK((y.vec() - s.y0.vec()).norm() < 1e-2);
}

TEST_CASE("loop config and noise model pick up the simulate-only fields") {
    Scenario s = rendezvous();
    s.kind = ScenarioKind::Simulate;
    s.epsilon_m = 7.5;
    s.sigma_r_chief_m = 10.0;
    s.sigma_v_deputy_ms = 0.5;
    s.sigma_y_m = 1.0;
    s.zeta_pe_arcsec = 25.0;
    s.seed = 3;

    const LoopConfig config = make_loop_config(s);
    CHECK(config.epsilon == 7.5);
    CHECK(config.spec.mass == 200.0);

    const NoiseModel noise = make_noise_model(s);
    CHECK(noise.sigma_r_chief == 10.0);
    CHECK(noise.sigma_v_deputy == 0.5);
    CHECK(noise.sigma_y == 1.0);
    CHECK(noise.zeta_pe == doctest::Approx(deg2rad(25.0 / 3600.0)).epsilon(1e-12));
    CHECK(noise.rng_seed == 3);
}

TEST_CASE("profile, summary, and sweep outputs are well formed") {
    Scenario s = rendezvous();
    s.horizon_orbits = 1.0;  // keep the solve small
    s.y0 = RoeState{0, 200, 50, 0, 10, 0};
    const GuidanceSpec spec = make_guidance_spec(s);
    const GuidancePlan plan = solve_guidance(spec, SolverSettings{});
    const double period = orbit_period(spec.grid.chief_epoch_elements.a, spec.earth.mu);

    const std::string csv = profile_csv(plan, period, spec.mass);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# ltg-profile v1");
    std::getline(in, line);
    CHECK(line ==
          "time_s,orbit_frac,da_m,dlambda_m,dex_m,dey_m,dix_m,diy_m,"
          "f_r_mn,f_t_mn,f_n_mn,arc,dv_cum_ms");
    std::size_t rows = 0;
    bool saw_end = false;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 12);
        if (line.find(",end,") != std::string::npos) saw_end = true;
    }
    CHECK(rows == plan.num_arcs() + 1);
    CHECK(saw_end);

    const std::string summary = summary_text(plan, spec.yf);
    CHECK(summary.find("delta_v_total_ms = ") != std::string::npos);
    CHECK(summary.find("num_arcs = ") != std::string::npos);

    SweepResult sweep;
    sweep.tf_orbits = {0.1};
    sweep.tn_seconds = {60.0};
    CellResult cell;
    cell.tf_orbits = 0.1;
    cell.tn_seconds = 60.0;
    cell.success = false;
    cell.infeasible = 1;
    sweep.cells = {cell};
    const std::string table = sweep_csv(sweep);
    CHECK(table.find("# ltg-sweep v1") == 0);
    CHECK(table.find(",nan") != std::string::npos);
}
