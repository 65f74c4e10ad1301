#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace isopath {

/// Both backends sit behind the same contract: relative residual of the
/// returned solution is at most `tol`, or a solver-failure error is thrown
/// with the achieved residual in the message. The matrix need not be
/// symmetric.
enum class SolverKind { Direct, Gmres };

struct SolveOptions {
    SolverKind kind = SolverKind::Direct;
    double tol = 1e-8;
    int max_iterations = 2000;
    int restart = 50;
};

Eigen::MatrixXd solve_sparse(const Eigen::SparseMatrix<double>& a,
                             const Eigen::MatrixXd& rhs,
                             const SolveOptions& opts = {});

} // namespace isopath
