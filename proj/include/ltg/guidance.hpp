#pragma once

#include <optional>
#include <vector>

#include "ltg/lindyn.hpp"
#include "ltg/qp.hpp"
#include "ltg/time_grid.hpp"

namespace ltg {

/// Half-plane {x : normal . x <= offset} of a polygonal norm relaxation.
struct HalfPlane {
    Eigen::Vector2d normal;
    double offset;
};

/// Regular n-gon inscribed in the radius-d ball, as half-planes with
/// normals at gamma_j = 2(j-1)pi/n + gamma_first and offset d cos(pi/n).
std::vector<HalfPlane> polygon_halfplanes(double d, int n, double gamma_first);

/// Area of the inscribed regular n-gon over the area of its circle.
double polygon_area_ratio(int n);

/// Data of one guidance problem: reach yf from y0 over the grid with a
/// single bounded thruster.
struct GuidanceSpec {
    TimeGrid grid;
    RoeState y0;
    RoeState yf;
    double f_max = 7e-3;        // [N]
    double mass = 200.0;        // [kg]
    int n_dir = 12;             // T-N plane polygon sides
    double gamma_first = 0.0;   // [rad]
    EarthModel earth{};

    void validate() const;
};
// The R-T and R-N planes always use the 4-sided rhombus with first
// direction pi/4; those parameters are fixed, not configurable.

/// Decoded guidance solution.
struct GuidancePlan {
    std::vector<double> instants;             // copy of the grid instants [s]
    std::vector<ArcKind> arc_kinds;           // per arc
    std::vector<RoeState> nodes;              // per instant [m]
    std::vector<Eigen::Vector3d> thrust;      // per arc, RTN [N], zero on coasts
    double delta_v_total = 0.0;               // [m/s]
    double cost = 0.0;                        // QP objective in solver scaling
    int solver_iterations = 0;
    double solve_time = 0.0;                  // [s]

    std::size_t num_arcs() const { return arc_kinds.size(); }
    double arc_duration(std::size_t k) const { return instants[k + 1] - instants[k]; }
    bool is_forced(std::size_t k) const { return arc_kinds[k] == ArcKind::Forced; }
};

/// Reported when the grid cannot steer y0 to yf; carries the minimal-norm
/// terminal residual [m] reachable under the thrust constraints.
struct GuidanceInfeasible : std::runtime_error {
    explicit GuidanceInfeasible(const Vector6d& residual_m);
    Vector6d boundary_residual;  // [m]
};

struct GuidanceSolverFailure : std::runtime_error {
    GuidanceSolverFailure(SolveStatus status_, const std::string& what_);
    SolveStatus status;
};

/// Assemble Problem 2 as a canonical QP. Decision vector: node states (km)
/// for every grid instant followed by one thrust vector (mN) per forced
/// arc; coast thrusts are eliminated rather than constrained to zero.
QpProblem build_problem(const GuidanceSpec& spec, const std::vector<StmPair>& stms);

/// Build, solve, and decode. Throws GuidanceInfeasible / GuidanceSolverFailure.
GuidancePlan solve_guidance(const GuidanceSpec& spec, const std::vector<StmPair>& stms,
                            const SolverSettings& settings);

/// Convenience overload computing the per-arc matrices internally.
GuidancePlan solve_guidance(const GuidanceSpec& spec, const SolverSettings& settings);

/// Total velocity change of a plan: sum of |f|/M * duration over forced arcs.
double delta_v(const GuidancePlan& plan, double mass);

/// Mean slew rate between each consecutive pair of nonzero thrust vectors:
/// angle between directions over the intervening off-time [rad/s].
std::vector<double> mean_slew_rates(const GuidancePlan& plan);

/// Minimal-norm terminal boundary residual [m] reachable from y0 under the
/// thrust constraints (0 when the problem is feasible). Used for
/// infeasibility diagnosis.
Vector6d boundary_residual(const GuidanceSpec& spec, const std::vector<StmPair>& stms,
                           const SolverSettings& settings);

}  // namespace ltg
