#include "isopath/linsolve.hpp"

#include "isopath/error.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <string>

namespace isopath {

namespace {

void check_residual(const Eigen::SparseMatrix<double>& a,
                    const Eigen::MatrixXd& x, const Eigen::MatrixXd& rhs,
                    double tol) {
    const double bnorm = rhs.norm();
    const double res = (a * x - rhs).norm();
    const double rel = bnorm > 0 ? res / bnorm : res;
    if (!(rel <= tol) || !x.allFinite())
        throw Error(ErrorCode::SolverFailure,
                    "sparse solve did not reach tolerance: relative residual " +
                        std::to_string(rel) + " > " + std::to_string(tol));
}

} // namespace

Eigen::MatrixXd solve_sparse(const Eigen::SparseMatrix<double>& a,
                             const Eigen::MatrixXd& rhs,
                             const SolveOptions& opts) {
    if (a.rows() != a.cols() || a.rows() != rhs.rows())
        throw Error(ErrorCode::InvalidArgument, "solve_sparse: shape mismatch");
    Eigen::MatrixXd x(rhs.rows(), rhs.cols());
    if (opts.kind == SolverKind::Direct) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw Error(ErrorCode::SolverFailure,
                        "sparse LU factorization failed (singular system)");
        x = lu.solve(rhs);
    } else {
        Eigen::GMRES<Eigen::SparseMatrix<double>,
                     Eigen::IncompleteLUT<double>>
            gmres;
        gmres.setTolerance(opts.tol * 1e-2);
        gmres.setMaxIterations(opts.max_iterations);
        gmres.set_restart(opts.restart);
        gmres.compute(a);
        if (gmres.info() != Eigen::Success)
            throw Error(ErrorCode::SolverFailure, "GMRES preconditioner setup failed");
        for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
            x.col(c) = gmres.solve(rhs.col(c));
            if (gmres.info() != Eigen::Success)
                throw Error(ErrorCode::SolverFailure,
                            "GMRES did not converge: error " +
                                std::to_string(gmres.error()));
        }
    }
    check_residual(a, x, rhs, opts.tol);
    return x;
}

} // namespace isopath
