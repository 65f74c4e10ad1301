#pragma once

#include "isopath/kdtree.hpp"
#include "isopath/parallel.hpp"
#include "isopath/types.hpp"

#include <cstdint>
#include <vector>

namespace isopath {

struct WeightSet; // weights.hpp

enum class PointTag : std::uint8_t { Interior, Boundary };

struct Neighborhood {
    std::uint32_t center = 0;
    std::vector<std::uint32_t> members; // ascending distance, center excluded
    std::vector<double> distances;      // mm, nondecreasing
};

/// Point container with a k-d index. Immutable after construction except
/// through set_normals / set_tags / fair; read-only queries are
/// thread-safe.
class PointCloud {
public:
    explicit PointCloud(std::vector<Vec3> points);

    std::size_t size() const { return points_.size(); }
    const Vec3& point(std::size_t i) const { return points_[i]; }
    const std::vector<Vec3>& points() const { return points_; }
    const KdTree<3>& index() const { return index_; }

    bool has_normals() const { return !normals_.empty(); }
    const Vec3& normal(std::size_t i) const { return normals_[i]; }
    const std::vector<Vec3>& normals() const { return normals_; }
    void set_normals(std::vector<Vec3> normals);

    PointTag tag(std::size_t i) const { return tags_[i]; }
    const std::vector<PointTag>& tags() const { return tags_; }
    void set_tags(std::vector<PointTag> tags);
    std::size_t interior_count() const;
    std::size_t boundary_count() const;

private:
    std::vector<Vec3> points_;
    std::vector<Vec3> normals_;
    std::vector<PointTag> tags_;
    KdTree<3> index_;
};

/// k nearest cloud points to an arbitrary query position.
Neighborhood knn(const PointCloud& cloud, const Vec3& query, std::size_t k);

/// k nearest neighbors of cloud point i, the point itself excluded.
Neighborhood knn_of_point(const PointCloud& cloud, std::uint32_t i, std::size_t k);

/// Covariance (PCA) normal at point i from its k nearest neighbors.
/// Sign is canonical (largest-magnitude component positive); use
/// compute_normals for a consistently oriented field.
Vec3 estimate_normal(const PointCloud& cloud, std::uint32_t i, std::size_t k);

/// Estimates all normals and orients them consistently by propagation
/// along a minimum spanning tree of the KNN graph, outward (+z) at the
/// max-z seed point.
void compute_normals(PointCloud& cloud, std::size_t k,
                     Execution exec = Execution::Parallel);

/// Tags each point Boundary iff the largest angular gap between its
/// neighbors projected onto the tangent plane exceeds gap_threshold.
/// Normals are computed first if absent. Returns the tags (also written
/// into the cloud).
std::vector<PointTag> classify_boundary(PointCloud& cloud, std::size_t k,
                                        double gap_threshold,
                                        Execution exec = Execution::Parallel);

constexpr std::size_t kDefaultNeighborhoodSize = 12;
constexpr double kDefaultGapThreshold = 0.7 * 3.14159265358979323846;

/// Laplacian fairing: interior points relax toward their weighted
/// neighbor average, boundary points stay fixed.
PointCloud fair(const PointCloud& cloud, const WeightSet& weights, int steps,
                double damping);

} // namespace isopath
