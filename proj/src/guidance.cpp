#include "ltg/guidance.hpp"

#include <cmath>
#include <sstream>

namespace ltg {

namespace {

constexpr double kStateScale = 1e-3;   // m -> km inside the QP
constexpr double kThrustScale = 1e3;   // N -> mN inside the QP

std::vector<std::size_t> forced_indices(const TimeGrid& grid) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < grid.num_arcs(); ++k)
        if (grid.is_forced(k)) idx.push_back(k);
    return idx;
}

}  // namespace

std::vector<HalfPlane> polygon_halfplanes(double d, int n, double gamma_first) {
    if (n < 3) throw std::invalid_argument("polygon_halfplanes: need at least 3 sides");
    if (!(d > 0.0)) throw std::invalid_argument("polygon_halfplanes: radius must be > 0");
    std::vector<HalfPlane> planes;
    planes.reserve(static_cast<std::size_t>(n));
    const double offset = d * std::cos(kPi / n);
    for (int j = 0; j < n; ++j) {
        const double gamma = 2.0 * j * kPi / n + gamma_first;
        planes.push_back({Eigen::Vector2d(std::cos(gamma), std::sin(gamma)), offset});
    }
    return planes;
}

double polygon_area_ratio(int n) {
    if (n < 3) throw std::invalid_argument("polygon_area_ratio: need at least 3 sides");
    return n * std::sin(kTwoPi / n) / kTwoPi;
}

void GuidanceSpec::validate() const {
    grid.validate();
    if (n_dir < 3) throw std::invalid_argument("GuidanceSpec: n_dir must be >= 3");
    if (!(f_max > 0.0)) throw std::invalid_argument("GuidanceSpec: f_max must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("GuidanceSpec: mass must be > 0");
}

GuidanceInfeasible::GuidanceInfeasible(const Vector6d& residual_m)
    : std::runtime_error("guidance problem infeasible; minimal terminal residual " +
                         std::to_string(residual_m.norm()) + " m"),
      boundary_residual(residual_m) {}

GuidanceSolverFailure::GuidanceSolverFailure(SolveStatus status_, const std::string& what_)
    : std::runtime_error(what_), status(status_) {}

QpProblem build_problem(const GuidanceSpec& spec, const std::vector<StmPair>& stms) {
    spec.validate();
    const TimeGrid& grid = spec.grid;
    if (stms.size() != grid.num_arcs())
        throw std::invalid_argument("build_problem: one StmPair required per arc");

    const std::vector<std::size_t> forced = forced_indices(grid);
    const Eigen::Index num_nodes = static_cast<Eigen::Index>(grid.instants.size());
    const Eigen::Index nf = static_cast<Eigen::Index>(forced.size());
    const Eigen::Index n = 6 * num_nodes + 3 * nf;
    const Eigen::Index thrust_base = 6 * num_nodes;

    QpProblem qp;
    qp.q = Eigen::VectorXd::Zero(n);

    // Cost: sum of squared scaled thrusts (0.5 x'Px with P = 2I on thrusts).
    {
        std::vector<Eigen::Triplet<double>> trips;
        for (Eigen::Index j = 0; j < 3 * nf; ++j)
            trips.emplace_back(static_cast<int>(thrust_base + j),
                               static_cast<int>(thrust_base + j), 2.0);
        qp.P.resize(n, n);
        qp.P.setFromTriplets(trips.begin(), trips.end());
    }

    // Equalities: initial node, dynamics chaining per arc, terminal node.
    const Eigen::Index num_eq = 6 + 6 * static_cast<Eigen::Index>(grid.num_arcs()) + 6;
    {
        std::vector<Eigen::Triplet<double>> trips;
        qp.b = Eigen::VectorXd::Zero(num_eq);
        Eigen::Index row = 0;
        for (int i = 0; i < 6; ++i) trips.emplace_back(static_cast<int>(row + i), i, 1.0);
        qp.b.segment(row, 6) = kStateScale * spec.y0.vec();
        row += 6;

        // Thrust convolution coefficient: psi maps m/s^2 -> m; with states in
        // km and thrusts in mN the entry becomes psi * 1e-6 / mass.
        const double psi_coeff = 1e-6 / spec.mass;
        std::size_t f_slot = 0;
        for (std::size_t k = 0; k < grid.num_arcs(); ++k) {
            const Matrix6d& phi = stms[k].phi;
            for (int i = 0; i < 6; ++i) {
                trips.emplace_back(static_cast<int>(row + i),
                                   static_cast<int>(6 * (k + 1) + i), 1.0);
                for (int j = 0; j < 6; ++j)
                    if (phi(i, j) != 0.0)
                        trips.emplace_back(static_cast<int>(row + i),
                                           static_cast<int>(6 * k + j), -phi(i, j));
            }
            if (grid.is_forced(k)) {
                const Matrix63d b_mat = stms[k].psi * psi_coeff;
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (b_mat(i, j) != 0.0)
                            trips.emplace_back(
                                static_cast<int>(row + i),
                                static_cast<int>(thrust_base + 3 * f_slot + j), -b_mat(i, j));
                ++f_slot;
            }
            row += 6;
        }
        for (int i = 0; i < 6; ++i)
            trips.emplace_back(static_cast<int>(row + i),
                               static_cast<int>(6 * (num_nodes - 1) + i), 1.0);
        qp.b.segment(row, 6) = kStateScale * spec.yf.vec();
        qp.E.resize(num_eq, n);
        qp.E.setFromTriplets(trips.begin(), trips.end());
    }

    // Inequalities: T-N polygon plus the two fixed R-T / R-N rhombuses.
    const double f_max_scaled = spec.f_max * kThrustScale;
    const auto tn_planes = polygon_halfplanes(f_max_scaled, spec.n_dir, spec.gamma_first);
    const auto bar_planes = polygon_halfplanes(f_max_scaled, 4, kPi / 4.0);
    const Eigen::Index rows_per_arc = spec.n_dir + 8;
    const Eigen::Index num_in = rows_per_arc * nf;
    {
        std::vector<Eigen::Triplet<double>> trips;
        qp.h = Eigen::VectorXd::Zero(num_in);
        Eigen::Index row = 0;
        for (Eigen::Index s = 0; s < nf; ++s) {
            const Eigen::Index fr = thrust_base + 3 * s;  // (f_R, f_T, f_N)
            for (const HalfPlane& p : tn_planes) {
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 1), p.normal.x());
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 2), p.normal.y());
                qp.h[row++] = p.offset;
            }
            for (const HalfPlane& p : bar_planes) {
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 0), p.normal.x());
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 1), p.normal.y());
                qp.h[row++] = p.offset;
            }
            for (const HalfPlane& p : bar_planes) {
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 0), p.normal.x());
                trips.emplace_back(static_cast<int>(row), static_cast<int>(fr + 2), p.normal.y());
                qp.h[row++] = p.offset;
            }
        }
        qp.G.resize(num_in, n);
        qp.G.setFromTriplets(trips.begin(), trips.end());
    }
    return qp;
}

Vector6d boundary_residual(const GuidanceSpec& spec, const std::vector<StmPair>& stms,
                           const SolverSettings& settings) {
    // Condensed reachability problem: minimize the terminal defect over the
    // thrust polytopes with the node states eliminated through the dynamics.
    const TimeGrid& grid = spec.grid;
    const std::vector<std::size_t> forced = forced_indices(grid);
    const Eigen::Index nf = static_cast<Eigen::Index>(forced.size());
    const double psi_coeff = 1e-6 / spec.mass;

    // Suffix products phi(t_{k+1} -> t_f).
    std::vector<Matrix6d> suffix(grid.num_arcs() + 1);
    suffix[grid.num_arcs()] = Matrix6d::Identity();
    for (std::size_t k = grid.num_arcs(); k-- > 0;)
        suffix[k] = suffix[k + 1] * stms[k].phi;

    Eigen::MatrixXd C(6, 3 * nf);
    for (Eigen::Index s = 0; s < nf; ++s)
        C.middleCols(3 * s, 3) = suffix[forced[static_cast<std::size_t>(s)] + 1] *
                                 stms[forced[static_cast<std::size_t>(s)]].psi * psi_coeff;
    const Vector6d d = kStateScale * spec.yf.vec() - suffix[0] * (kStateScale * spec.y0.vec());

    // Keep the KKT system sparse: an auxiliary residual variable r with
    // C f - r = d turns the dense normal-equations objective ||C f - d||^2
    // into a diagonal one on r.
    const Eigen::Index n_ls = 3 * nf + 6;
    QpProblem ls;
    {
        std::vector<Eigen::Triplet<double>> p_trips;
        for (Eigen::Index j = 0; j < 6; ++j)
            p_trips.emplace_back(static_cast<int>(3 * nf + j), static_cast<int>(3 * nf + j), 2.0);
        ls.P.resize(n_ls, n_ls);
        ls.P.setFromTriplets(p_trips.begin(), p_trips.end());
    }
    ls.q = Eigen::VectorXd::Zero(n_ls);
    {
        std::vector<Eigen::Triplet<double>> e_trips;
        for (Eigen::Index i = 0; i < 6; ++i) {
            for (Eigen::Index j = 0; j < 3 * nf; ++j)
                e_trips.emplace_back(static_cast<int>(i), static_cast<int>(j), C(i, j));
            e_trips.emplace_back(static_cast<int>(i), static_cast<int>(3 * nf + i), -1.0);
        }
        ls.E.resize(6, n_ls);
        ls.E.setFromTriplets(e_trips.begin(), e_trips.end());
    }
    ls.b = d;
    // Same thrust polytopes as the full problem.
    const double f_max_scaled = spec.f_max * kThrustScale;
    const auto tn_planes = polygon_halfplanes(f_max_scaled, spec.n_dir, spec.gamma_first);
    const auto bar_planes = polygon_halfplanes(f_max_scaled, 4, kPi / 4.0);
    const Eigen::Index rows_per_arc = spec.n_dir + 8;
    std::vector<Eigen::Triplet<double>> trips;
    ls.h = Eigen::VectorXd::Zero(rows_per_arc * nf);
    Eigen::Index row = 0;
    for (Eigen::Index s = 0; s < nf; ++s) {
        for (const HalfPlane& p : tn_planes) {
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 1), p.normal.x());
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 2), p.normal.y());
            ls.h[row++] = p.offset;
        }
        for (const HalfPlane& p : bar_planes) {
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 0), p.normal.x());
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 1), p.normal.y());
            ls.h[row++] = p.offset;
        }
        for (const HalfPlane& p : bar_planes) {
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 0), p.normal.x());
            trips.emplace_back(static_cast<int>(row), static_cast<int>(3 * s + 2), p.normal.y());
            ls.h[row++] = p.offset;
        }
    }
    ls.G.resize(rows_per_arc * nf, n_ls);
    ls.G.setFromTriplets(trips.begin(), trips.end());

    SolverSettings ls_settings = settings;
    ls_settings.eps_abs = std::max(settings.eps_abs, 1e-8);
    const SolverResult res = solve(ls, ls_settings);
    const Vector6d defect = C * res.primal.head(3 * nf) - d;  // [km]
    return defect / kStateScale;
}

namespace {

GuidancePlan decode(const GuidanceSpec& spec, const SolverResult& result) {
    const TimeGrid& grid = spec.grid;
    GuidancePlan plan;
    plan.instants = grid.instants;
    plan.arc_kinds = grid.arc_kinds;
    const Eigen::Index num_nodes = static_cast<Eigen::Index>(grid.instants.size());
    plan.nodes.reserve(static_cast<std::size_t>(num_nodes));
    for (Eigen::Index i = 0; i < num_nodes; ++i)
        plan.nodes.push_back(RoeState::from_vec(result.primal.segment<6>(6 * i) / kStateScale));
    std::size_t f_slot = 0;
    plan.thrust.assign(grid.num_arcs(), Eigen::Vector3d::Zero());
    for (std::size_t k = 0; k < grid.num_arcs(); ++k)
        if (grid.is_forced(k))
            plan.thrust[k] =
                result.primal.segment<3>(6 * num_nodes + 3 * static_cast<Eigen::Index>(f_slot++)) /
                kThrustScale;
    plan.cost = result.objective;
    plan.solver_iterations = result.iterations;
    plan.solve_time = result.solve_time;
    plan.delta_v_total = delta_v(plan, spec.mass);
    return plan;
}

}  // namespace

GuidancePlan solve_guidance(const GuidanceSpec& spec, const std::vector<StmPair>& stms,
                            const SolverSettings& settings) {
    const QpProblem qp = build_problem(spec, stms);
    const SolverResult result = solve(qp, settings);
    switch (result.status) {
        case SolveStatus::Solved:
            return decode(spec, result);
        case SolveStatus::PrimalInfeasible: {
            const Vector6d residual = boundary_residual(spec, stms, settings);
            if (residual.norm() > 1.0) throw GuidanceInfeasible(residual);
            // The certificate tolerance is approximate; the independent
            // reachability check says the target is attainable, so retry
            // once with certificate detection effectively disabled.
            SolverSettings strict = settings;
            strict.eps_infeasible = 1e-12;
            const SolverResult retry = solve(qp, strict);
            if (retry.status == SolveStatus::Solved) return decode(spec, retry);
            throw GuidanceSolverFailure(retry.status,
                                        "guidance solver failed on a reachable target");
        }
        case SolveStatus::MaxIterations: {
            // Distinguish slow convergence from infeasibility before spending
            // more effort: the reachability check is cheap, so unattainable
            // targets fail fast and only provably reachable ones earn a
            // larger iteration budget.
            const Vector6d residual = boundary_residual(spec, stms, settings);
            if (residual.norm() > 1.0) throw GuidanceInfeasible(residual);
            SolverSettings patient = settings;
            patient.max_iterations = 4 * settings.max_iterations;
            const SolverResult retry = solve(qp, patient);
            if (retry.status == SolveStatus::Solved) return decode(spec, retry);
            throw GuidanceSolverFailure(retry.status,
                                        "guidance solver hit the iteration limit");
        }
        case SolveStatus::DualInfeasible:
            throw GuidanceSolverFailure(result.status, "guidance problem unbounded (ill-posed)");
    }
    throw GuidanceSolverFailure(result.status, "guidance solver failed");
}

GuidancePlan solve_guidance(const GuidanceSpec& spec, const SolverSettings& settings) {
    return solve_guidance(spec, grid_stms(spec.grid, spec.earth), settings);
}

double delta_v(const GuidancePlan& plan, double mass) {
    if (!(mass > 0.0)) throw std::invalid_argument("delta_v: mass must be > 0");
    double dv = 0.0;
    for (std::size_t k = 0; k < plan.num_arcs(); ++k)
        if (plan.is_forced(k)) dv += plan.thrust[k].norm() / mass * plan.arc_duration(k);
    return dv;
}

std::vector<double> mean_slew_rates(const GuidancePlan& plan) {
    std::vector<double> rates;
    std::ptrdiff_t prev = -1;
    for (std::size_t k = 0; k < plan.num_arcs(); ++k) {
        if (!plan.is_forced(k) || plan.thrust[k].norm() < 1e-9) continue;
        if (prev >= 0) {
            const Eigen::Vector3d a = plan.thrust[static_cast<std::size_t>(prev)].normalized();
            const Eigen::Vector3d b = plan.thrust[k].normalized();
            const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
            const double gap = plan.instants[k] - plan.instants[static_cast<std::size_t>(prev) + 1];
            rates.push_back(gap > 0.0 ? angle / gap : 0.0);
        }
        prev = static_cast<std::ptrdiff_t>(k);
    }
    return rates;
}

}  // namespace ltg
