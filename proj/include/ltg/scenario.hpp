#pragma once

#include <optional>
#include <string>

#include "ltg/closed_loop.hpp"
#include "ltg/guidance.hpp"
#include "ltg/sweep.hpp"

namespace ltg {

enum class ScenarioKind { Guide, Simulate };

/// A maneuver description as read from a key = value scenario file.
/// Values keep the file's units; the make_* helpers convert to SI.
struct Scenario {
    ScenarioKind kind = ScenarioKind::Guide;

    // Chief osculating elements.
    double chief_a_km = 0.0;
    double chief_u_deg = 0.0;
    double chief_ex = 0.0;
    double chief_ey = 0.0;
    double chief_i_deg = 0.0;
    double chief_raan_deg = 0.0;

    RoeState y0;                          // [m]
    RoeState yf;                          // [m]
    double horizon_orbits = 0.0;

    std::vector<double> tf_orbits;        // forced-arc lengths, one per segment
    std::vector<double> tf_until_orbits;  // segment ends; empty iff single segment
    std::optional<double> tn_seconds;     // coast length; default from the slew rule
    std::vector<ThrustWindow> windows_orbits;  // no-thrust windows [orbits]

    int n_dir = 12;
    double gamma_first_deg = 0.0;
    double mass_kg = 0.0;
    double f_max_mn = 0.0;
    double omega_max_deg_s = 2.0;
    double t_safety_s = 10.0;

    // Closed-loop-only fields.
    double epsilon_m = 5.0;
    double sigma_r_chief_m = 0.0;
    double sigma_v_chief_ms = 0.0;
    double sigma_r_deputy_m = 0.0;
    double sigma_v_deputy_ms = 0.0;
    double sigma_y_m = 0.0;
    double zeta_pe_arcsec = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Raised on malformed scenario text; carries the offending line number
/// (0 when the problem is not tied to one line) and key.
struct ScenarioParseError : std::runtime_error {
    ScenarioParseError(int line_, const std::string& key_, const std::string& message);
    int line;
    std::string key;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario_text(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Chief osculating elements in SI units.
OrbitalElements scenario_chief_osc(const Scenario& s);

/// Coast duration: explicit tn_seconds or the slew-time rule.
double scenario_tn(const Scenario& s);

/// Full guidance problem (grid included) in SI units.
GuidanceSpec make_guidance_spec(const Scenario& s);

NoiseModel make_noise_model(const Scenario& s);
LoopConfig make_loop_config(const Scenario& s);

/// Deputy initial osculating elements realizing y0 relative to the chief.
OrbitalElements deputy_initial_osc(const Scenario& s);

/// Columnar time series of a plan or a closed-loop trace: time in seconds
/// and in chief-orbit fractions, the six ROE [m], RTN thrust [mN], arc
/// kind, and cumulative delta-v [m/s]. One row per arc start plus a final
/// row at the horizon end.
std::string profile_csv(const GuidancePlan& plan, double period, double mass);
std::string profile_csv(const LoopTrace& trace, double period, double mass);

/// Human-readable key = value summary.
std::string summary_text(const GuidancePlan& plan, const RoeState& yf);
std::string summary_text(const LoopTrace& trace);

/// Sweep result as a CSV table (one row per cell).
std::string sweep_csv(const SweepResult& result);

}  // namespace ltg
