#pragma once

#include "isopath/cloud.hpp"

#include <Eigen/Core>

#include <vector>

namespace isopath {

/// Per-point affine neighbor weights: the rows of the discrete Laplacian.
/// Rows exist only for Interior points; boundary rows are never formed.
struct WeightSet {
    std::vector<std::vector<std::uint32_t>> neighbors; // size n
    std::vector<std::vector<double>> weights;          // sums to 1 per row
    std::vector<double> fit_residual;                  // ||p_i - sum w_ij p_j||, mm

    std::size_t size() const { return neighbors.size(); }
    bool has_row(std::size_t i) const {
        return i < neighbors.size() && !neighbors[i].empty();
    }
};

/// Minimizes ||sum_j w_j d_j||^2 over weights summing to 1, where column j
/// of `diffs` is p_i - p_j. Solves the Gram system C w = 1 with a small
/// Tikhonov term, rescales to the affine constraint, then removes the
/// regularization bias with a constrained least-squares polish.
template <int Dim>
Eigen::VectorXd optimal_weight_row(
    const Eigen::Matrix<double, Dim, Eigen::Dynamic>& diffs);

/// Optimal weights of point i over its k nearest neighbors. Neighbor
/// indices are returned through `neighbor_indices` when non-null.
Eigen::VectorXd optimal_weights(const PointCloud& cloud, std::uint32_t i,
                                std::size_t k,
                                std::vector<std::uint32_t>* neighbor_indices = nullptr);

/// One weight row per Interior point of a classified cloud.
WeightSet build_laplacian(const PointCloud& cloud,
                          std::size_t k = kDefaultNeighborhoodSize,
                          Execution exec = Execution::Parallel);

} // namespace isopath
