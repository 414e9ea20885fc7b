#include "ltg/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ltg/astro.hpp"

namespace ltg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

/// Raw key/value lines with duplicate and unknown-key detection.
class KeyTable {
public:
    KeyTable(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ScenarioParseError(number, "", "expected 'key = value'");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) throw ScenarioParseError(number, "", "empty key");
            if (value.empty()) throw ScenarioParseError(number, key, "empty value");
            if (!entries_.emplace(key, Entry{number, value}).second)
                throw ScenarioParseError(number, key, "duplicate key");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string take(const std::string& key, int& line) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ScenarioParseError(0, key, "missing required key");
        line = it->second.line;
        const std::string value = it->second.value;
        entries_.erase(it);
        return value;
    }

    void reject_unknown() const {
        if (entries_.empty()) return;
        const auto& it = *entries_.begin();
        throw ScenarioParseError(it.second.line, it.first, "unknown key");
    }

private:
    struct Entry {
        int line;
        std::string value;
    };
    std::map<std::string, Entry> entries_;
};

double parse_double(const std::string& value, int line, const std::string& key) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ScenarioParseError(line, key, "not a number: '" + value + "'");
    }
    if (trim(value.substr(pos)) != "")
        throw ScenarioParseError(line, key, "trailing characters in '" + value + "'");
    return out;
}

std::vector<double> parse_list(const std::string& value, int line, const std::string& key) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item), line, key));
    if (out.empty()) throw ScenarioParseError(line, key, "empty list");
    return out;
}

RoeState parse_roe(const std::string& value, int line, const std::string& key) {
    const std::vector<double> v = parse_list(value, line, key);
    if (v.size() != 6) throw ScenarioParseError(line, key, "expected 6 comma-separated values");
    Vector6d y;
    for (int j = 0; j < 6; ++j) y[j] = v[static_cast<std::size_t>(j)];
    return RoeState::from_vec(y);
}

}  // namespace

ScenarioParseError::ScenarioParseError(int line_, const std::string& key_,
                                       const std::string& message)
    : std::runtime_error("scenario" + (line_ > 0 ? " line " + std::to_string(line_) : "") +
                         (key_.empty() ? "" : " key '" + key_ + "'") + ": " + message),
      line(line_),
      key(key_) {}

void Scenario::validate() const {
    if (!(chief_a_km > 0.0)) throw ScenarioParseError(0, "chief_a_km", "must be > 0");
    if (!(horizon_orbits > 0.0)) throw ScenarioParseError(0, "horizon_orbits", "must be > 0");
    if (tf_orbits.empty()) throw ScenarioParseError(0, "tf_orbits", "must be nonempty");
    for (double tf : tf_orbits)
        if (!(tf > 0.0)) throw ScenarioParseError(0, "tf_orbits", "entries must be > 0");
    if (tf_orbits.size() > 1 && tf_until_orbits.size() != tf_orbits.size())
        throw ScenarioParseError(0, "tf_until_orbits",
                                 "must list one segment end per tf_orbits entry");
    for (std::size_t i = 0; i + 1 < tf_until_orbits.size(); ++i)
        if (!(tf_until_orbits[i] < tf_until_orbits[i + 1]))
            throw ScenarioParseError(0, "tf_until_orbits", "must be strictly increasing");
    if (!tf_until_orbits.empty() && !windows_orbits.empty())
        throw ScenarioParseError(0, "no_thrust_windows_orbits",
                                 "windows cannot be combined with per-segment tf");
    for (const ThrustWindow& w : windows_orbits)
        if (!(w.start < w.end))
            throw ScenarioParseError(0, "no_thrust_windows_orbits", "window start must precede end");
    if (n_dir < 3) throw ScenarioParseError(0, "n_dir", "must be >= 3");
    if (!(mass_kg > 0.0)) throw ScenarioParseError(0, "mass_kg", "must be > 0");
    if (!(f_max_mn > 0.0)) throw ScenarioParseError(0, "f_max_mn", "must be > 0");
    if (!(omega_max_deg_s > 0.0)) throw ScenarioParseError(0, "omega_max_deg_s", "must be > 0");
    if (t_safety_s < 0.0) throw ScenarioParseError(0, "t_safety_s", "must be >= 0");
    if (tn_seconds && !(*tn_seconds > 0.0))
        throw ScenarioParseError(0, "tn_seconds", "must be > 0");
    if (!(epsilon_m > 0.0)) throw ScenarioParseError(0, "epsilon_m", "must be > 0");
    if (sigma_r_chief_m < 0 || sigma_v_chief_ms < 0 || sigma_r_deputy_m < 0 ||
        sigma_v_deputy_ms < 0 || sigma_y_m < 0 || zeta_pe_arcsec < 0)
        throw ScenarioParseError(0, "noise", "standard deviations must be >= 0");
}

Scenario parse_scenario_text(const std::string& text) {
    KeyTable table(text);
    Scenario s;
    int line = 0;

    const std::string kind = table.take("kind", line);
    if (kind == "guide")
        s.kind = ScenarioKind::Guide;
    else if (kind == "simulate")
        s.kind = ScenarioKind::Simulate;
    else
        throw ScenarioParseError(line, "kind", "expected 'guide' or 'simulate'");

    const auto number = [&](const std::string& key, double& out) {
        out = parse_double(table.take(key, line), line, key);
    };
    const auto optional_number = [&](const std::string& key, double& out) {
        if (table.has(key)) number(key, out);
    };

    number("chief_a_km", s.chief_a_km);
    optional_number("chief_u_deg", s.chief_u_deg);
    optional_number("chief_ex", s.chief_ex);
    optional_number("chief_ey", s.chief_ey);
    number("chief_i_deg", s.chief_i_deg);
    optional_number("chief_raan_deg", s.chief_raan_deg);

    s.y0 = parse_roe(table.take("y0_m", line), line, "y0_m");
    s.yf = parse_roe(table.take("yf_m", line), line, "yf_m");
    number("horizon_orbits", s.horizon_orbits);
    s.tf_orbits = parse_list(table.take("tf_orbits", line), line, "tf_orbits");
    if (table.has("tf_until_orbits"))
        s.tf_until_orbits =
            parse_list(table.take("tf_until_orbits", line), line, "tf_until_orbits");
    if (table.has("tn_seconds")) {
        double tn = 0.0;
        number("tn_seconds", tn);
        s.tn_seconds = tn;
    }
    if (table.has("no_thrust_windows_orbits")) {
        const std::vector<double> v = parse_list(table.take("no_thrust_windows_orbits", line),
                                                 line, "no_thrust_windows_orbits");
        if (v.size() % 2 != 0)
            throw ScenarioParseError(line, "no_thrust_windows_orbits",
                                     "expected start,end pairs");
        for (std::size_t i = 0; i < v.size(); i += 2)
            s.windows_orbits.push_back(ThrustWindow{v[i], v[i + 1]});
    }
    if (table.has("n_dir")) {
        double v = 0.0;
        number("n_dir", v);
        s.n_dir = static_cast<int>(v);
    }
    optional_number("gamma_first_deg", s.gamma_first_deg);
    number("mass_kg", s.mass_kg);
    number("f_max_mn", s.f_max_mn);
    optional_number("omega_max_deg_s", s.omega_max_deg_s);
    optional_number("t_safety_s", s.t_safety_s);

    optional_number("epsilon_m", s.epsilon_m);
    optional_number("sigma_r_chief_m", s.sigma_r_chief_m);
    optional_number("sigma_v_chief_ms", s.sigma_v_chief_ms);
    optional_number("sigma_r_deputy_m", s.sigma_r_deputy_m);
    optional_number("sigma_v_deputy_ms", s.sigma_v_deputy_ms);
    optional_number("sigma_y_m", s.sigma_y_m);
    optional_number("zeta_pe_arcsec", s.zeta_pe_arcsec);
    if (table.has("seed")) {
        double v = 0.0;
        number("seed", v);
        s.seed = static_cast<std::uint64_t>(v);
    }

    table.reject_unknown();
    s.validate();
    return s;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError(0, "", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "kind = " << (s.kind == ScenarioKind::Guide ? "guide" : "simulate") << "\n";
    out << "chief_a_km = " << format_double(s.chief_a_km) << "\n";
    out << "chief_u_deg = " << format_double(s.chief_u_deg) << "\n";
    out << "chief_ex = " << format_double(s.chief_ex) << "\n";
    out << "chief_ey = " << format_double(s.chief_ey) << "\n";
    out << "chief_i_deg = " << format_double(s.chief_i_deg) << "\n";
    out << "chief_raan_deg = " << format_double(s.chief_raan_deg) << "\n";
    const auto roe_list = [](const RoeState& y) {
        const Vector6d v = y.vec();
        return format_list({v[0], v[1], v[2], v[3], v[4], v[5]});
    };
    out << "y0_m = " << roe_list(s.y0) << "\n";
    out << "yf_m = " << roe_list(s.yf) << "\n";
    out << "horizon_orbits = " << format_double(s.horizon_orbits) << "\n";
    out << "tf_orbits = " << format_list(s.tf_orbits) << "\n";
    if (!s.tf_until_orbits.empty())
        out << "tf_until_orbits = " << format_list(s.tf_until_orbits) << "\n";
    if (s.tn_seconds) out << "tn_seconds = " << format_double(*s.tn_seconds) << "\n";
    if (!s.windows_orbits.empty()) {
        std::vector<double> flat;
        for (const ThrustWindow& w : s.windows_orbits) {
            flat.push_back(w.start);
            flat.push_back(w.end);
        }
        out << "no_thrust_windows_orbits = " << format_list(flat) << "\n";
    }
    out << "n_dir = " << s.n_dir << "\n";
    out << "gamma_first_deg = " << format_double(s.gamma_first_deg) << "\n";
    out << "mass_kg = " << format_double(s.mass_kg) << "\n";
    out << "f_max_mn = " << format_double(s.f_max_mn) << "\n";
    out << "omega_max_deg_s = " << format_double(s.omega_max_deg_s) << "\n";
    out << "t_safety_s = " << format_double(s.t_safety_s) << "\n";
    out << "epsilon_m = " << format_double(s.epsilon_m) << "\n";
    out << "sigma_r_chief_m = " << format_double(s.sigma_r_chief_m) << "\n";
    out << "sigma_v_chief_ms = " << format_double(s.sigma_v_chief_ms) << "\n";
    out << "sigma_r_deputy_m = " << format_double(s.sigma_r_deputy_m) << "\n";
    out << "sigma_v_deputy_ms = " << format_double(s.sigma_v_deputy_ms) << "\n";
    out << "sigma_y_m = " << format_double(s.sigma_y_m) << "\n";
    out << "zeta_pe_arcsec = " << format_double(s.zeta_pe_arcsec) << "\n";
    out << "seed = " << s.seed << "\n";
    return out.str();
}

OrbitalElements scenario_chief_osc(const Scenario& s) {
    OrbitalElements oe;
    oe.a = s.chief_a_km * 1e3;
    oe.u = deg2rad(s.chief_u_deg);
    oe.ex = s.chief_ex;
    oe.ey = s.chief_ey;
    oe.i = deg2rad(s.chief_i_deg);
    oe.raan = deg2rad(s.chief_raan_deg);
    oe.flavor = ElementFlavor::Osculating;
    oe.validate();
    return oe;
}

double scenario_tn(const Scenario& s) {
    if (s.tn_seconds) return *s.tn_seconds;
    return min_coast_duration(deg2rad(s.omega_max_deg_s), s.t_safety_s);
}

GuidanceSpec make_guidance_spec(const Scenario& s) {
    s.validate();
    GuidanceSpec spec;
    spec.earth = EarthModel{};
    const OrbitalElements chief_mean = osc_to_mean(scenario_chief_osc(s), spec.earth);
    const double period = orbit_period(chief_mean.a, spec.earth.mu);
    const double tn = scenario_tn(s);
    const double horizon = s.horizon_orbits * period;

    if (!s.windows_orbits.empty()) {
        std::vector<ThrustWindow> windows;
        for (const ThrustWindow& w : s.windows_orbits)
            windows.push_back(ThrustWindow{w.start * period, w.end * period});
        spec.grid = build_grid_with_windows(0.0, horizon, s.tf_orbits[0] * period, windows, tn,
                                            chief_mean);
    } else if (s.tf_orbits.size() == 1) {
        spec.grid = build_grid(0.0, horizon, s.tf_orbits[0] * period, tn, chief_mean);
    } else {
        std::vector<TfSegment> segments;
        for (std::size_t i = 0; i < s.tf_orbits.size(); ++i)
            segments.push_back(TfSegment{s.tf_until_orbits[i] * period,
                                         s.tf_orbits[i] * period});
        spec.grid = build_grid(0.0, horizon, segments, tn, chief_mean);
    }

    spec.y0 = s.y0;
    spec.yf = s.yf;
    spec.f_max = s.f_max_mn * 1e-3;
    spec.mass = s.mass_kg;
    spec.n_dir = s.n_dir;
    spec.gamma_first = deg2rad(s.gamma_first_deg);
    spec.validate();
    return spec;
}

NoiseModel make_noise_model(const Scenario& s) {
    NoiseModel noise;
    noise.sigma_r_chief = s.sigma_r_chief_m;
    noise.sigma_v_chief = s.sigma_v_chief_ms;
    noise.sigma_r_deputy = s.sigma_r_deputy_m;
    noise.sigma_v_deputy = s.sigma_v_deputy_ms;
    noise.sigma_y = s.sigma_y_m;
    noise.zeta_pe = deg2rad(s.zeta_pe_arcsec / 3600.0);
    noise.rng_seed = s.seed;
    return noise;
}

LoopConfig make_loop_config(const Scenario& s) {
    LoopConfig config;
    config.spec = make_guidance_spec(s);
    config.epsilon = s.epsilon_m;
    return config;
}

OrbitalElements deputy_initial_osc(const Scenario& s) {
    const EarthModel earth{};
    const OrbitalElements chief = osc_to_mean(scenario_chief_osc(s), earth);
    if (std::abs(std::sin(chief.i)) < 1e-6)
        throw std::invalid_argument("deputy_initial_osc: chief inclination too close to zero");
    const double a = chief.a;
    OrbitalElements dep = chief;
    dep.a += s.y0.da;
    dep.ex += s.y0.dex / a;
    dep.ey += s.y0.dey / a;
    dep.i += s.y0.dix / a;
    const double draan = s.y0.diy / a / std::sin(chief.i);
    dep.raan += draan;
    dep.u += s.y0.dlambda / a - draan * std::cos(chief.i);
    dep.normalize_angles();
    dep.validate();
    return mean_to_osc(dep, earth);
}

namespace {

const char* kProfileHeader =
    "time_s,orbit_frac,da_m,dlambda_m,dex_m,dey_m,dix_m,diy_m,"
    "f_r_mn,f_t_mn,f_n_mn,arc,dv_cum_ms";

void profile_row(std::ostringstream& out, double t, double period, const RoeState& y,
                 const Eigen::Vector3d& f_newton, const char* arc, double dv_cum) {
    const Vector6d v = y.vec();
    out << format_double(t) << "," << format_double(t / period);
    for (int j = 0; j < 6; ++j) out << "," << format_double(v[j]);
    for (int j = 0; j < 3; ++j) out << "," << format_double(f_newton[j] * 1e3);
    out << "," << arc << "," << format_double(dv_cum) << "\n";
}

const char* arc_name(ArcKind kind) { return kind == ArcKind::Forced ? "forced" : "coast"; }

}  // namespace

std::string profile_csv(const GuidancePlan& plan, double period, double mass) {
    std::ostringstream out;
    out << "# ltg-profile v1\n" << kProfileHeader << "\n";
    double dv = 0.0;
    for (std::size_t k = 0; k < plan.num_arcs(); ++k) {
        profile_row(out, plan.instants[k], period, plan.nodes[k], plan.thrust[k],
                    arc_name(plan.arc_kinds[k]), dv);
        dv += plan.thrust[k].norm() / mass * plan.arc_duration(k);
    }
    profile_row(out, plan.instants.back(), period, plan.nodes.back(), Eigen::Vector3d::Zero(),
                "end", dv);
    return out.str();
}

std::string profile_csv(const LoopTrace& trace, double period, double mass) {
    std::ostringstream out;
    out << "# ltg-profile v1\n" << kProfileHeader << "\n";
    double dv = 0.0;
    for (const LoopStep& step : trace.steps) {
        profile_row(out, step.t_start, period, step.y_true, step.f_applied, arc_name(step.kind),
                    dv);
        dv += step.f_applied.norm() / mass * (step.t_end - step.t_start);
    }
    profile_row(out, trace.steps.back().t_end, period, trace.y_final, Eigen::Vector3d::Zero(),
                "end", dv);
    return out.str();
}

namespace {

std::string vector6_list(const Vector6d& v) {
    return format_list({v[0], v[1], v[2], v[3], v[4], v[5]});
}

}  // namespace

std::string summary_text(const GuidancePlan& plan, const RoeState& yf) {
    std::ostringstream out;
    out << "delta_v_total_ms = " << format_double(plan.delta_v_total) << "\n";
    out << "terminal_residual_m = " << vector6_list(plan.nodes.back().vec() - yf.vec()) << "\n";
    out << "cost = " << format_double(plan.cost) << "\n";
    out << "solver_iterations = " << plan.solver_iterations << "\n";
    out << "solve_time_s = " << format_double(plan.solve_time) << "\n";
    out << "num_arcs = " << plan.num_arcs() << "\n";
    return out.str();
}

std::string summary_text(const LoopTrace& trace) {
    double solve_time = 0.0;
    for (const LoopStep& step : trace.steps) solve_time += step.solve_time;
    std::ostringstream out;
    out << "delta_v_total_ms = " << format_double(trace.delta_v_total) << "\n";
    out << "terminal_error_m = " << vector6_list(trace.terminal_error) << "\n";
    out << "resolve_count = " << trace.resolve_count << "\n";
    out << "fallback_count = " << trace.fallback_count << "\n";
    out << "resample_count = " << trace.resample_count << "\n";
    out << "total_solve_time_s = " << format_double(solve_time) << "\n";
    out << "num_arcs = " << trace.steps.size() << "\n";
    return out.str();
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "# ltg-sweep v1\n";
    out << "tf_orbits,tn_seconds,success,solved,infeasible,failed,mean_cost,fitness\n";
    for (const CellResult& c : result.cells) {
        out << format_double(c.tf_orbits) << "," << format_double(c.tn_seconds) << ","
            << (c.success ? 1 : 0) << "," << c.solved << "," << c.infeasible << "," << c.failed
            << "," << format_double(c.mean_cost) << ","
            << (c.success ? format_double(c.fitness) : std::string("nan")) << "\n";
    }
    return out.str();
}

}  // namespace ltg
