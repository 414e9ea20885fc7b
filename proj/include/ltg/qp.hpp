#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

namespace ltg {

using SparseMatrixd = Eigen::SparseMatrix<double>;

/// Convex QP in canonical form:
///   minimize 0.5 x'Px + q'x  s.t.  E x = b,  G x <= h.
struct QpProblem {
    SparseMatrixd P;         // n x n, symmetric PSD
    Eigen::VectorXd q;       // n
    SparseMatrixd E;         // n_eq x n
    Eigen::VectorXd b;       // n_eq
    SparseMatrixd G;         // n_in x n
    Eigen::VectorXd h;       // n_in

    Eigen::Index num_vars() const { return q.size(); }
    Eigen::Index num_eq() const { return b.size(); }
    Eigen::Index num_ineq() const { return h.size(); }
    void validate() const;
};

enum class SolveStatus { Solved, MaxIterations, PrimalInfeasible, DualInfeasible };

std::string to_string(SolveStatus status);

struct SolverSettings {
    int max_iterations = 50000;
    double eps_abs = 1e-6;
    double eps_rel = 1e-6;
    double eps_infeasible = 1e-5;
    double rho = 10.0;
    bool adaptive_rho = true;
    bool polish = true;

    void validate() const;
};

struct SolverResult {
    SolveStatus status = SolveStatus::MaxIterations;
    Eigen::VectorXd primal;       // n
    Eigen::VectorXd dual_eq;      // n_eq, multipliers of E x = b
    Eigen::VectorXd dual_ineq;    // n_in, multipliers of G x <= h (>= 0)
    double objective = 0.0;
    int iterations = 0;
    double solve_time = 0.0;      // [s]
    bool polished = false;
    Eigen::VectorXd certificate;  // infeasibility certificate when detected
};

struct KktResiduals {
    double r_primal = 0.0;  // max equality/inequality violation
    double r_dual = 0.0;    // stationarity residual
    double r_gap = 0.0;     // complementarity residual
};

/// Solve the QP with an operator-splitting (ADMM) method; deterministic for
/// identical inputs and settings.
SolverResult solve(const QpProblem& problem, const SolverSettings& settings);

KktResiduals kkt_residuals(const QpProblem& problem, const Eigen::VectorXd& primal,
                           const Eigen::VectorXd& dual_eq, const Eigen::VectorXd& dual_ineq);

}  // namespace ltg
