#include "isopath/weights.hpp"

#include "isopath/error.hpp"

#include <Eigen/Dense>

namespace isopath {

template <int Dim>
Eigen::VectorXd optimal_weight_row(
    const Eigen::Matrix<double, Dim, Eigen::Dynamic>& diffs) {
    const Eigen::Index m = diffs.cols();
    if (m < 3)
        throw Error(ErrorCode::InvalidArgument,
                    "optimal_weight_row: need at least 3 neighbors, got " +
                        std::to_string(m));

    const Eigen::MatrixXd c = diffs.transpose() * diffs;
    const double trace = c.trace();
    if (!(trace > 0.0))
        throw Error(ErrorCode::DegenerateGeometry,
                    "optimal_weight_row: neighborhood is coincident");

    const double mu = 1e-8 * trace / static_cast<double>(m);
    Eigen::MatrixXd reg = c;
    reg.diagonal().array() += mu;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(reg);
    if (ldlt.info() != Eigen::Success)
        throw Error(ErrorCode::DegenerateGeometry,
                    "optimal_weight_row: Gram system singular beyond regularization");
    Eigen::VectorXd w = ldlt.solve(Eigen::VectorXd::Ones(m));
    const double sum = w.sum();
    if (std::abs(sum) < 1e-300)
        throw Error(ErrorCode::DegenerateGeometry,
                    "optimal_weight_row: weight sum vanished, cannot rescale");
    w /= sum;

    // The Tikhonov term biases the residual by O(mu); polish within the
    // sum-zero subspace (basis e_k - e_m) to recover the exact constrained
    // minimizer.
    Eigen::Matrix<double, Dim, Eigen::Dynamic> gz(Dim, m - 1);
    for (Eigen::Index k = 0; k + 1 < m; ++k)
        gz.col(k) = diffs.col(k) - diffs.col(m - 1);
    const Eigen::Matrix<double, Dim, 1> r = diffs * w;
    const Eigen::VectorXd y =
        gz.completeOrthogonalDecomposition().solve((-r).eval());
    w.head(m - 1) += y;
    w(m - 1) -= y.sum();
    return w;
}

template Eigen::VectorXd
optimal_weight_row<2>(const Eigen::Matrix<double, 2, Eigen::Dynamic>&);
template Eigen::VectorXd
optimal_weight_row<3>(const Eigen::Matrix<double, 3, Eigen::Dynamic>&);

Eigen::VectorXd optimal_weights(const PointCloud& cloud, std::uint32_t i,
                                std::size_t k,
                                std::vector<std::uint32_t>* neighbor_indices) {
    const Neighborhood nb = knn_of_point(cloud, i, k);
    Eigen::Matrix<double, 3, Eigen::Dynamic> diffs(3, nb.members.size());
    for (std::size_t j = 0; j < nb.members.size(); ++j)
        diffs.col(j) = cloud.point(i) - cloud.point(nb.members[j]);
    Eigen::VectorXd w = optimal_weight_row<3>(diffs);
    if (neighbor_indices) *neighbor_indices = nb.members;
    return w;
}

WeightSet build_laplacian(const PointCloud& cloud, std::size_t k, Execution exec) {
    const std::size_t n = cloud.size();
    if (k + 1 > n)
        throw Error(ErrorCode::InvalidArgument,
                    "build_laplacian: cloud smaller than neighborhood size");
    WeightSet ws;
    ws.neighbors.resize(n);
    ws.weights.resize(n);
    ws.fit_residual.assign(n, 0.0);

    std::vector<std::string> failures(n);
    for_each_index(n, exec, [&](std::size_t i) {
        if (cloud.tag(i) != PointTag::Interior) return;
        try {
            std::vector<std::uint32_t> idx;
            Eigen::VectorXd w =
                optimal_weights(cloud, static_cast<std::uint32_t>(i), k, &idx);
            Vec3 combo = Vec3::Zero();
            for (std::size_t j = 0; j < idx.size(); ++j)
                combo += w(j) * cloud.point(idx[j]);
            ws.fit_residual[i] = (cloud.point(i) - combo).norm();
            ws.neighbors[i] = std::move(idx);
            ws.weights[i].assign(w.data(), w.data() + w.size());
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw Error(ErrorCode::DegenerateGeometry,
                        "build_laplacian: point " + std::to_string(i) + ": " +
                            failures[i]);
    return ws;
}

} // namespace isopath
