#include "isopath/cloud.hpp"

#include "isopath/error.hpp"
#include "isopath/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <queue>

namespace isopath {

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
    if (points_.empty())
        throw Error(ErrorCode::InvalidInput, "PointCloud: empty point set");
    for (const Vec3& p : points_)
        if (!p.allFinite())
            throw Error(ErrorCode::InvalidInput,
                        "PointCloud: non-finite coordinate");
    tags_.assign(points_.size(), PointTag::Interior);
    index_ = KdTree<3>(points_);
}

void PointCloud::set_normals(std::vector<Vec3> normals) {
    if (normals.size() != points_.size())
        throw Error(ErrorCode::InvalidInput, "set_normals: size mismatch");
    for (const Vec3& n : normals)
        if (std::abs(n.norm() - 1.0) > 1e-9)
            throw Error(ErrorCode::InvalidInput, "set_normals: non-unit normal");
    normals_ = std::move(normals);
}

void PointCloud::set_tags(std::vector<PointTag> tags) {
    if (tags.size() != points_.size())
        throw Error(ErrorCode::InvalidInput, "set_tags: size mismatch");
    tags_ = std::move(tags);
}

std::size_t PointCloud::interior_count() const {
    return static_cast<std::size_t>(
        std::count(tags_.begin(), tags_.end(), PointTag::Interior));
}

std::size_t PointCloud::boundary_count() const {
    return points_.size() - interior_count();
}

Neighborhood knn(const PointCloud& cloud, const Vec3& query, std::size_t k) {
    auto hits = cloud.index().knn(query, k);
    Neighborhood nb;
    nb.members.reserve(hits.size());
    nb.distances.reserve(hits.size());
    for (const auto& h : hits) {
        nb.members.push_back(h.index);
        nb.distances.push_back(h.dist);
    }
    return nb;
}

Neighborhood knn_of_point(const PointCloud& cloud, std::uint32_t i, std::size_t k) {
    auto hits = cloud.index().knn(cloud.point(i), k, static_cast<std::int64_t>(i));
    Neighborhood nb;
    nb.center = i;
    for (const auto& h : hits) {
        nb.members.push_back(h.index);
        nb.distances.push_back(h.dist);
    }
    return nb;
}

namespace {

// Unoriented PCA normal; throws on rank-deficient neighborhoods.
Vec3 pca_normal(const PointCloud& cloud, std::uint32_t i, std::size_t k) {
    if (k < 3)
        throw Error(ErrorCode::InvalidArgument, "estimate_normal: k must be >= 3");
    const Neighborhood nb = knn_of_point(cloud, i, k);
    Vec3 centroid = Vec3::Zero();
    for (auto j : nb.members) centroid += cloud.point(j);
    centroid /= static_cast<double>(nb.members.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (auto j : nb.members) {
        const Vec3 d = cloud.point(j) - centroid;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(nb.members.size());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Vec3 evals = eig.eigenvalues(); // ascending
    if (!(evals(2) > 0.0) || evals(1) - evals(0) <= 1e-9 * evals(2))
        throw Error(ErrorCode::DegenerateGeometry,
                    "estimate_normal: neighborhood of point " + std::to_string(i) +
                        " is degenerate (collinear or coincident)");
    return eig.eigenvectors().col(0).normalized();
}

Vec3 canonical_sign(Vec3 n) {
    int c = 0;
    n.cwiseAbs().maxCoeff(&c);
    return n(c) < 0 ? Vec3(-n) : n;
}

} // namespace

Vec3 estimate_normal(const PointCloud& cloud, std::uint32_t i, std::size_t k) {
    return canonical_sign(pca_normal(cloud, i, k));
}

void compute_normals(PointCloud& cloud, std::size_t k, Execution exec) {
    const std::size_t n = cloud.size();
    std::vector<Vec3> normals(n);
    std::vector<std::string> failures(n);
    for_each_index(n, exec, [&](std::size_t i) {
        try {
            normals[i] = pca_normal(cloud, static_cast<std::uint32_t>(i), k);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw Error(ErrorCode::DegenerateGeometry, failures[i]);

    // Consistent orientation: Prim MST over the KNN graph, edge cost
    // 1 - |n_i . n_j|, seeded at the max-z point pointing +z.
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Neighborhood nb =
            knn_of_point(cloud, static_cast<std::uint32_t>(i), std::min(k, n - 1));
        for (auto j : nb.members) {
            adj[i].push_back(j);
            adj[j].push_back(static_cast<std::uint32_t>(i));
        }
    }
    std::vector<char> done(n, 0);
    using QE = std::pair<double, std::pair<std::uint32_t, std::uint32_t>>; // cost, (from,to)
    for (;;) {
        std::int64_t seed = -1;
        double zbest = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && cloud.point(i).z() > zbest) {
                zbest = cloud.point(i).z();
                seed = static_cast<std::int64_t>(i);
            }
        if (seed < 0) break;
        if (normals[seed].z() < 0) normals[seed] = -normals[seed];
        std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
        pq.push({0.0, {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed)}});
        while (!pq.empty()) {
            auto [cost, edge] = pq.top();
            pq.pop();
            auto [from, to] = edge;
            if (done[to]) continue;
            done[to] = 1;
            if (to != from && normals[from].dot(normals[to]) < 0)
                normals[to] = -normals[to];
            for (auto j : adj[to])
                if (!done[j])
                    pq.push({1.0 - std::abs(normals[to].dot(normals[j])), {to, j}});
        }
    }
    cloud.set_normals(std::move(normals));
}

std::vector<PointTag> classify_boundary(PointCloud& cloud, std::size_t k,
                                        double gap_threshold, Execution exec) {
    const std::size_t n = cloud.size();
    if (k + 1 > n)
        throw Error(ErrorCode::InvalidArgument,
                    "classify_boundary: cloud smaller than neighborhood size");
    if (!cloud.has_normals()) compute_normals(cloud, k, exec);

    std::vector<PointTag> tags(n, PointTag::Interior);
    std::vector<std::string> failures(n);
    for_each_index(n, exec, [&](std::size_t i) {
        const Vec3& nrm = cloud.normal(i);
        // Tangent basis, deterministic in the normal direction.
        int least = 0;
        nrm.cwiseAbs().minCoeff(&least);
        const Vec3 e1 = Vec3::Unit(least).cross(nrm).normalized();
        const Vec3 e2 = nrm.cross(e1);
        const Neighborhood nb =
            knn_of_point(cloud, static_cast<std::uint32_t>(i), k);
        std::vector<double> angles;
        angles.reserve(nb.members.size());
        for (auto j : nb.members) {
            const Vec3 d = cloud.point(j) - cloud.point(i);
            const double x = d.dot(e1), y = d.dot(e2);
            if (x * x + y * y > 1e-24 * d.squaredNorm() + 1e-300)
                angles.push_back(std::atan2(y, x));
        }
        if (angles.size() < 3) {
            failures[i] = "classify_boundary: point " + std::to_string(i) +
                          " has fewer than 3 projectable neighbors";
            return;
        }
        std::sort(angles.begin(), angles.end());
        double max_gap = angles.front() + 2.0 * M_PI - angles.back();
        for (std::size_t a = 1; a < angles.size(); ++a)
            max_gap = std::max(max_gap, angles[a] - angles[a - 1]);
        tags[i] = max_gap > gap_threshold ? PointTag::Boundary : PointTag::Interior;
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw Error(ErrorCode::DegenerateGeometry, failures[i]);
    cloud.set_tags(tags);
    return tags;
}

PointCloud fair(const PointCloud& cloud, const WeightSet& weights, int steps,
                double damping) {
    if (!(damping > 0.0 && damping <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "fair: damping must be in (0,1]");
    std::vector<Vec3> pts = cloud.points();
    for (int s = 0; s < steps; ++s) {
        std::vector<Vec3> next = pts;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (cloud.tag(i) != PointTag::Interior || !weights.has_row(i)) continue;
            Vec3 avg = Vec3::Zero();
            const auto& nbr = weights.neighbors[i];
            const auto& w = weights.weights[i];
            for (std::size_t j = 0; j < nbr.size(); ++j) avg += w[j] * pts[nbr[j]];
            next[i] = pts[i] - damping * (pts[i] - avg);
        }
        pts.swap(next);
    }
    // Normals are stale after fairing and are not carried over.
    PointCloud out(std::move(pts));
    out.set_tags(cloud.tags());
    return out;
}

} // namespace isopath
