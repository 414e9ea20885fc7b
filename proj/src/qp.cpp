#include "ltg/qp.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ltg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSigma = 1e-6;       // proximal regularization
constexpr double kAlpha = 1.6;        // relaxation
constexpr double kRhoEqScale = 1e3;   // stiffer penalty on equality rows
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr int kCheckInterval = 25;
constexpr int kScalingIters = 10;

double inf_norm(const Eigen::VectorXd& v) {
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

/// Column-wise infinity norms of a sparse matrix.
Eigen::VectorXd col_inf_norms(const SparseMatrixd& m) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m.cols());
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(m, k); it; ++it)
            out[it.col()] = std::max(out[it.col()], std::abs(it.value()));
    return out;
}

Eigen::VectorXd row_inf_norms(const SparseMatrixd& m) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(m, k); it; ++it)
            out[it.row()] = std::max(out[it.row()], std::abs(it.value()));
    return out;
}

struct Workspace {
    // Scaled data.
    SparseMatrixd P, A;
    Eigen::VectorXd q, lo, up;
    // Scaling diagonals: x = D x_hat, y = (Esc / c) y_hat.
    Eigen::VectorXd D, Esc;
    double c = 1.0;
    Eigen::Index n = 0, m = 0;
};

Workspace scale_problem(const QpProblem& prob) {
    Workspace w;
    w.n = prob.num_vars();
    w.m = prob.num_eq() + prob.num_ineq();
    w.P = prob.P;
    w.q = prob.q;

    // Stack A = [E; G] with bounds b <= Ex <= b, -inf <= Gx <= h.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(prob.E.nonZeros() + prob.G.nonZeros()));
    for (int k = 0; k < prob.E.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(prob.E, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < prob.G.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(prob.G, k); it; ++it)
            trips.emplace_back(static_cast<int>(prob.num_eq() + it.row()),
                               static_cast<int>(it.col()), it.value());
    w.A.resize(w.m, w.n);
    w.A.setFromTriplets(trips.begin(), trips.end());
    w.lo.resize(w.m);
    w.up.resize(w.m);
    w.lo.head(prob.num_eq()) = prob.b;
    w.up.head(prob.num_eq()) = prob.b;
    w.lo.tail(prob.num_ineq()).setConstant(-kInf);
    w.up.tail(prob.num_ineq()) = prob.h;

    // Modified Ruiz equilibration.
    w.D = Eigen::VectorXd::Ones(w.n);
    w.Esc = Eigen::VectorXd::Ones(w.m);
    for (int iter = 0; iter < kScalingIters; ++iter) {
        Eigen::VectorXd cn = col_inf_norms(w.P).cwiseMax(col_inf_norms(w.A));
        Eigen::VectorXd rn = row_inf_norms(w.A);
        Eigen::VectorXd dd = cn.unaryExpr(
            [](double v) { return v > 1e-12 ? 1.0 / std::sqrt(v) : 1.0; });
        Eigen::VectorXd de = rn.unaryExpr(
            [](double v) { return v > 1e-12 ? 1.0 / std::sqrt(v) : 1.0; });
        w.P = dd.asDiagonal() * w.P * dd.asDiagonal();
        w.q = dd.cwiseProduct(w.q);
        w.A = de.asDiagonal() * w.A * dd.asDiagonal();
        w.D = w.D.cwiseProduct(dd);
        w.Esc = w.Esc.cwiseProduct(de);
    }
    // Cost normalization, once, after equilibration; repeating it inside the
    // loop compounds and skews the cost against the constraints.
    const Eigen::VectorXd pn = col_inf_norms(w.P);
    double pcol_mean = 0.0;
    int nz = 0;
    for (Eigen::Index j = 0; j < pn.size(); ++j)
        if (pn[j] > 0.0) {
            pcol_mean += pn[j];
            ++nz;
        }
    if (nz) pcol_mean /= nz;
    const double gamma_den = std::max(pcol_mean, inf_norm(w.q));
    const double gamma = gamma_den > 1e-12 ? 1.0 / gamma_den : 1.0;
    w.P *= gamma;
    w.q *= gamma;
    w.c = gamma;
    return w;
}

void scale_bounds(const QpProblem& prob, Workspace& w) {
    w.lo.head(prob.num_eq()) = w.Esc.head(prob.num_eq()).cwiseProduct(prob.b);
    w.up.head(prob.num_eq()) = w.lo.head(prob.num_eq());
    w.lo.tail(prob.num_ineq()).setConstant(-kInf);
    w.up.tail(prob.num_ineq()) = w.Esc.tail(prob.num_ineq()).cwiseProduct(prob.h);
}

SparseMatrixd build_kkt(const Workspace& w, const Eigen::VectorXd& rho) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(w.P.nonZeros() + 2 * w.A.nonZeros() + w.n + w.m));
    for (int k = 0; k < w.P.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(w.P, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (Eigen::Index i = 0; i < w.n; ++i) trips.emplace_back(static_cast<int>(i),
                                                              static_cast<int>(i), kSigma);
    for (int k = 0; k < w.A.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(w.A, k); it; ++it) {
            trips.emplace_back(static_cast<int>(w.n + it.row()), static_cast<int>(it.col()),
                               it.value());
            trips.emplace_back(static_cast<int>(it.col()), static_cast<int>(w.n + it.row()),
                               it.value());
        }
    for (Eigen::Index j = 0; j < w.m; ++j)
        trips.emplace_back(static_cast<int>(w.n + j), static_cast<int>(w.n + j), -1.0 / rho[j]);
    SparseMatrixd kkt(w.n + w.m, w.n + w.m);
    kkt.setFromTriplets(trips.begin(), trips.end());
    return kkt;
}

struct UnscaledIterate {
    Eigen::VectorXd x, y, z;
};

UnscaledIterate unscale(const Workspace& w, const Eigen::VectorXd& x_hat,
                        const Eigen::VectorXd& y_hat, const Eigen::VectorXd& z_hat) {
    UnscaledIterate u;
    u.x = w.D.cwiseProduct(x_hat);
    u.y = w.Esc.cwiseProduct(y_hat) / w.c;
    u.z = z_hat.cwiseQuotient(w.Esc);
    return u;
}

void check_psd(const QpProblem& prob) {
    // Symmetry.
    SparseMatrixd diff = SparseMatrixd(prob.P.transpose()) - prob.P;
    double scale = 0.0;
    for (int k = 0; k < prob.P.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(prob.P, k); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(diff, k); it; ++it)
            if (std::abs(it.value()) > 1e-10 * std::max(scale, 1.0))
                throw std::invalid_argument("qp: cost matrix is not symmetric");
    // Semidefiniteness via a shifted Cholesky probe.
    SparseMatrixd shifted = prob.P;
    const double shift = 1e-9 * std::max(scale, 1.0);
    SparseMatrixd ident(prob.P.rows(), prob.P.cols());
    ident.setIdentity();
    shifted += shift * ident;
    Eigen::SimplicialLDLT<SparseMatrixd> ldlt(shifted);
    if (ldlt.info() != Eigen::Success ||
        (ldlt.vectorD().array() < -1e-7 * std::max(scale, 1.0)).any())
        throw std::invalid_argument("qp: cost matrix is not positive semidefinite");
}

}  // namespace

void QpProblem::validate() const {
    const Eigen::Index n = num_vars();
    if (P.rows() != n || P.cols() != n) throw std::invalid_argument("qp: P dimension mismatch");
    if (E.rows() != num_eq() || (E.rows() > 0 && E.cols() != n))
        throw std::invalid_argument("qp: equality dimension mismatch");
    if (G.rows() != num_ineq() || (G.rows() > 0 && G.cols() != n))
        throw std::invalid_argument("qp: inequality dimension mismatch");
}

void SolverSettings::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("qp: max_iterations must be >= 1");
    if (!(eps_abs > 0.0) || !(eps_rel > 0.0))
        throw std::invalid_argument("qp: tolerances must be > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("qp: rho must be > 0");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Solved: return "Solved";
        case SolveStatus::MaxIterations: return "MaxIterations";
        case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SolveStatus::DualInfeasible: return "DualInfeasible";
    }
    return "Unknown";
}

KktResiduals kkt_residuals(const QpProblem& problem, const Eigen::VectorXd& primal,
                           const Eigen::VectorXd& dual_eq, const Eigen::VectorXd& dual_ineq) {
    if (primal.size() != problem.num_vars() || dual_eq.size() != problem.num_eq() ||
        dual_ineq.size() != problem.num_ineq())
        throw std::invalid_argument("kkt_residuals: dimension mismatch");
    KktResiduals res;
    Eigen::VectorXd stat = problem.P * primal + problem.q;
    if (problem.num_eq()) stat += problem.E.transpose() * dual_eq;
    if (problem.num_ineq()) stat += problem.G.transpose() * dual_ineq;
    res.r_dual = inf_norm(stat);

    double rp = problem.num_eq() ? inf_norm(problem.E * primal - problem.b) : 0.0;
    if (problem.num_ineq()) {
        Eigen::VectorXd slack = problem.G * primal - problem.h;
        rp = std::max(rp, slack.cwiseMax(0.0).maxCoeff());
        res.r_gap = inf_norm(dual_ineq.cwiseProduct(slack));
        rp = std::max(rp, (-dual_ineq).cwiseMax(0.0).maxCoeff());  // dual feasibility
    }
    res.r_primal = rp;
    return res;
}

namespace {

/// Direct solution of the equality-constrained KKT system on the detected
/// active set, with static regularization and iterative refinement.
bool polish(const QpProblem& prob, SolverResult& result, const SolverSettings& settings) {
    const Eigen::Index n = prob.num_vars();
    std::vector<Eigen::Index> active;
    const double mu_scale = inf_norm(result.dual_ineq);
    Eigen::VectorXd slack =
        prob.num_ineq() ? Eigen::VectorXd(prob.G * result.primal - prob.h) : Eigen::VectorXd();
    for (Eigen::Index j = 0; j < prob.num_ineq(); ++j)
        if (result.dual_ineq[j] > 1e-8 * std::max(1.0, mu_scale) || slack[j] > -settings.eps_abs)
            active.push_back(j);

    const Eigen::Index ma = prob.num_eq() + static_cast<Eigen::Index>(active.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < prob.P.outerSize(); ++k)
        for (SparseMatrixd::InnerIterator it(prob.P, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    const double delta = 1e-9;
    for (Eigen::Index i = 0; i < n; ++i)
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), delta);

    using RowMajorSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    const RowMajorSparse Erm(prob.E), Grm(prob.G);
    auto add_row = [&](Eigen::Index kkt_row, const RowMajorSparse& mat, Eigen::Index mat_row) {
        for (RowMajorSparse::InnerIterator it(mat, mat_row); it; ++it) {
            trips.emplace_back(static_cast<int>(kkt_row), static_cast<int>(it.col()), it.value());
            trips.emplace_back(static_cast<int>(it.col()), static_cast<int>(kkt_row), it.value());
        }
    };
    for (Eigen::Index r = 0; r < prob.num_eq(); ++r) add_row(n + r, Erm, r);
    for (std::size_t s = 0; s < active.size(); ++s)
        add_row(n + prob.num_eq() + static_cast<Eigen::Index>(s), Grm, active[s]);
    for (Eigen::Index j = 0; j < ma; ++j)
        trips.emplace_back(static_cast<int>(n + j), static_cast<int>(n + j), -delta);

    SparseMatrixd kkt(n + ma, n + ma);
    kkt.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SparseMatrixd> lu;
    lu.compute(kkt);
    if (lu.info() != Eigen::Success) return false;

    Eigen::VectorXd rhs(n + ma);
    rhs.head(n) = -prob.q;
    rhs.segment(n, prob.num_eq()) = prob.b;
    for (std::size_t s = 0; s < active.size(); ++s)
        rhs[n + prob.num_eq() + static_cast<Eigen::Index>(s)] = prob.h[active[s]];

    // Iterative refinement against the unregularized system.
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int it = 0; it < 3; ++it) {
        Eigen::VectorXd residual = rhs;
        const Eigen::VectorXd x = sol.head(n);
        Eigen::VectorXd lam = sol.tail(ma);
        residual.head(n) -= prob.P * x;
        if (prob.num_eq()) residual.head(n) -= prob.E.transpose() * lam.head(prob.num_eq());
        for (std::size_t s = 0; s < active.size(); ++s)
            for (RowMajorSparse::InnerIterator it(Grm, active[s]); it; ++it)
                residual[it.col()] -= it.value() * lam[prob.num_eq() + static_cast<Eigen::Index>(s)];
        if (prob.num_eq()) residual.segment(n, prob.num_eq()) -= prob.E * x;
        for (std::size_t s = 0; s < active.size(); ++s) {
            double gx = 0.0;
            for (RowMajorSparse::InnerIterator it(Grm, active[s]); it; ++it)
                gx += it.value() * x[it.col()];
            residual[n + prob.num_eq() + static_cast<Eigen::Index>(s)] -= gx;
        }
        sol += lu.solve(residual);
    }

    Eigen::VectorXd x = sol.head(n);
    Eigen::VectorXd dual_eq = sol.segment(n, prob.num_eq());
    Eigen::VectorXd dual_ineq = Eigen::VectorXd::Zero(prob.num_ineq());
    for (std::size_t s = 0; s < active.size(); ++s)
        dual_ineq[active[s]] = std::max(0.0, sol[n + prob.num_eq() + static_cast<Eigen::Index>(s)]);

    const KktResiduals before =
        kkt_residuals(prob, result.primal, result.dual_eq, result.dual_ineq);
    const KktResiduals after = kkt_residuals(prob, x, dual_eq, dual_ineq);
    if (after.r_primal <= std::max(before.r_primal, settings.eps_abs) &&
        after.r_dual <= std::max(before.r_dual, settings.eps_abs)) {
        result.primal = x;
        result.dual_eq = dual_eq;
        result.dual_ineq = dual_ineq;
        result.polished = true;
        return true;
    }
    return false;
}

}  // namespace

SolverResult solve(const QpProblem& problem, const SolverSettings& settings) {
    const auto t_begin = std::chrono::steady_clock::now();
    problem.validate();
    settings.validate();
    check_psd(problem);

    const Eigen::Index n = problem.num_vars();
    SolverResult result;
    result.primal = Eigen::VectorXd::Zero(n);
    result.dual_eq = Eigen::VectorXd::Zero(problem.num_eq());
    result.dual_ineq = Eigen::VectorXd::Zero(problem.num_ineq());

    auto finish = [&](SolveStatus status) {
        result.status = status;
        result.objective = 0.5 * result.primal.dot(problem.P * result.primal) +
                           problem.q.dot(result.primal);
        result.solve_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
        return result;
    };

    // Unconstrained problem: direct regularized solve with refinement.
    if (problem.num_eq() + problem.num_ineq() == 0) {
        SparseMatrixd reg = problem.P;
        SparseMatrixd ident(n, n);
        ident.setIdentity();
        reg += kSigma * ident;
        Eigen::SimplicialLDLT<SparseMatrixd> ldlt(reg);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int it = 0; it < 100; ++it) {
            Eigen::VectorXd grad = problem.P * x + problem.q;
            if (inf_norm(grad) <= settings.eps_abs) {
                result.primal = x;
                result.iterations = it;
                return finish(SolveStatus::Solved);
            }
            x -= ldlt.solve(grad);
        }
        result.primal = x;
        result.certificate = -(problem.P * x + problem.q);
        return finish(SolveStatus::DualInfeasible);
    }

    Workspace w = scale_problem(problem);
    scale_bounds(problem, w);
    const Eigen::Index m = w.m;

    Eigen::VectorXd rho(m);
    double rho_bar = settings.rho;
    auto set_rho = [&]() {
        for (Eigen::Index j = 0; j < m; ++j)
            rho[j] = (j < problem.num_eq()) ? std::min(rho_bar * kRhoEqScale, kRhoMax) : rho_bar;
    };
    set_rho();

    Eigen::SparseLU<SparseMatrixd> lu;
    lu.compute(build_kkt(w, rho));
    if (lu.info() != Eigen::Success) throw std::runtime_error("qp: KKT factorization failed");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(w.n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd x_prev_chk = x, y_prev_chk = y;

    Eigen::VectorXd rhs(w.n + m), sol;
    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        rhs.head(w.n) = kSigma * x - w.q;
        rhs.tail(m) = z - y.cwiseQuotient(rho);
        sol = lu.solve(rhs);
        const Eigen::VectorXd x_tilde = sol.head(w.n);
        const Eigen::VectorXd z_tilde = z + (sol.tail(m) - y).cwiseQuotient(rho);

        x = kAlpha * x_tilde + (1.0 - kAlpha) * x;
        const Eigen::VectorXd z_relax = kAlpha * z_tilde + (1.0 - kAlpha) * z;
        const Eigen::VectorXd z_next = (z_relax + y.cwiseQuotient(rho)).cwiseMax(w.lo).cwiseMin(w.up);
        y += rho.cwiseProduct(z_relax - z_next);
        z = z_next;

        if (iter % kCheckInterval != 0 && iter != settings.max_iterations) continue;

        UnscaledIterate u = unscale(w, x, y, z);
        const Eigen::VectorXd Ax_eq =
            problem.num_eq() ? Eigen::VectorXd(problem.E * u.x) : Eigen::VectorXd();
        const Eigen::VectorXd Ax_in =
            problem.num_ineq() ? Eigen::VectorXd(problem.G * u.x) : Eigen::VectorXd();
        double norm_Ax = std::max(inf_norm(Ax_eq), inf_norm(Ax_in));
        double norm_z = inf_norm(u.z);
        double r_prim = 0.0;
        if (problem.num_eq()) r_prim = inf_norm(Ax_eq - problem.b);
        if (problem.num_ineq())
            r_prim = std::max(r_prim, (Ax_in - problem.h).cwiseMax(0.0).maxCoeff());

        Eigen::VectorXd Px = problem.P * u.x;
        Eigen::VectorXd Aty = Eigen::VectorXd::Zero(n);
        if (problem.num_eq()) Aty += problem.E.transpose() * u.y.head(problem.num_eq());
        if (problem.num_ineq()) Aty += problem.G.transpose() * u.y.tail(problem.num_ineq());
        const double r_dual = inf_norm(Px + problem.q + Aty);

        const double eps_prim =
            settings.eps_abs + settings.eps_rel * std::max(norm_Ax, norm_z);
        const double eps_dual =
            settings.eps_abs +
            settings.eps_rel * std::max({inf_norm(Px), inf_norm(Aty), inf_norm(problem.q)});

        if (r_prim <= eps_prim && r_dual <= eps_dual) {
            result.primal = u.x;
            result.dual_eq = u.y.head(problem.num_eq());
            result.dual_ineq = u.y.tail(problem.num_ineq()).cwiseMax(0.0);
            result.iterations = iter;
            if (settings.polish) polish(problem, result, settings);
            return finish(SolveStatus::Solved);
        }

        // Infeasibility certificates from the iterate deltas.
        UnscaledIterate up = unscale(w, x_prev_chk, y_prev_chk, z);
        Eigen::VectorXd dy = u.y - up.y;
        if (problem.num_ineq()) {
            auto tail = dy.tail(problem.num_ineq());
            tail = tail.cwiseMax(0.0);
        }
        const double dy_norm = inf_norm(dy);
        if (dy_norm > 1e-12) {
            Eigen::VectorXd Atdy = Eigen::VectorXd::Zero(n);
            if (problem.num_eq()) Atdy += problem.E.transpose() * dy.head(problem.num_eq());
            if (problem.num_ineq()) Atdy += problem.G.transpose() * dy.tail(problem.num_ineq());
            double support = 0.0;
            if (problem.num_eq()) support += problem.b.dot(dy.head(problem.num_eq()));
            if (problem.num_ineq()) support += problem.h.dot(dy.tail(problem.num_ineq()));
            if (inf_norm(Atdy) <= settings.eps_infeasible * dy_norm * std::max(1.0, norm_Ax) &&
                support <= -settings.eps_infeasible * dy_norm) {
                result.certificate = dy / dy_norm;
                result.iterations = iter;
                return finish(SolveStatus::PrimalInfeasible);
            }
        }
        Eigen::VectorXd dx = u.x - up.x;
        const double dx_norm = inf_norm(dx);
        if (dx_norm > 1e-12) {
            const bool cost_improves = problem.q.dot(dx) <= -settings.eps_infeasible * dx_norm;
            const bool in_null_p = inf_norm(problem.P * dx) <= settings.eps_infeasible * dx_norm;
            bool cone_ok = true;
            if (problem.num_eq() &&
                inf_norm(problem.E * dx) > settings.eps_infeasible * dx_norm)
                cone_ok = false;
            if (cone_ok && problem.num_ineq() &&
                (problem.G * dx).maxCoeff() > settings.eps_infeasible * dx_norm)
                cone_ok = false;
            if (cost_improves && in_null_p && cone_ok) {
                result.certificate = dx / dx_norm;
                result.iterations = iter;
                return finish(SolveStatus::DualInfeasible);
            }
        }
        x_prev_chk = x;
        y_prev_chk = y;

        // Penalty adaptation, rebalancing primal vs dual progress.
        if (settings.adaptive_rho && iter < settings.max_iterations) {
            const double denom_d =
                std::max({inf_norm(Px), inf_norm(Aty), inf_norm(problem.q), 1e-12});
            const double denom_p = std::max({norm_Ax, norm_z, 1e-12});
            const double ratio = std::sqrt((r_prim / denom_p) / std::max(r_dual / denom_d, 1e-14));
            if (ratio > 5.0 || ratio < 0.2) {
                rho_bar = std::clamp(rho_bar * ratio, kRhoMin, kRhoMax);
                set_rho();
                lu.compute(build_kkt(w, rho));
                if (lu.info() != Eigen::Success)
                    throw std::runtime_error("qp: KKT refactorization failed");
            }
        }
    }

    UnscaledIterate u = unscale(w, x, y, z);
    result.primal = u.x;
    result.dual_eq = u.y.head(problem.num_eq());
    result.dual_ineq = u.y.tail(problem.num_ineq()).cwiseMax(0.0);
    result.iterations = settings.max_iterations;
    // A stalled iterate often already identifies the correct active set.
    // Accept the polished solution only if it meets the tolerances outright.
    if (settings.polish && polish(problem, result, settings)) {
        const KktResiduals kkt =
            kkt_residuals(problem, result.primal, result.dual_eq, result.dual_ineq);
        if (kkt.r_primal <= settings.eps_abs && kkt.r_dual <= settings.eps_abs &&
            kkt.r_gap <= settings.eps_abs)
            return finish(SolveStatus::Solved);
    }
    return finish(SolveStatus::MaxIterations);
}

}  // namespace ltg
