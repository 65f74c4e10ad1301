#include "isopath/cloud.hpp"
#include "isopath/error.hpp"
#include "isopath/synthetic.hpp"
#include "isopath/weights.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace isopath;

namespace {

std::vector<Vec3> random_points(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    std::vector<Vec3> pts(n);
    for (auto& p : pts) p = {d(rng), d(rng), d(rng)};
    return pts;
}

} // namespace

TEST_CASE("kdtree knn matches brute force") {
    const auto pts = random_points(200, 3);
    const KdTree<3> kd(pts);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-12.0, 12.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 q(d(rng), d(rng), d(rng));
        const auto hits = kd.knn(q, 7);
        REQUIRE(hits.size() == 7);
        std::vector<double> dist(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = (pts[i] - q).norm();
        std::sort(dist.begin(), dist.end());
        for (std::size_t j = 0; j < 7; ++j)
            CHECK(hits[j].dist == doctest::Approx(dist[j]).epsilon(1e-12));
        for (std::size_t j = 1; j < 7; ++j) CHECK(hits[j - 1].dist <= hits[j].dist);
    }
}

TEST_CASE("kdtree rejects bad k") {
    const auto pts = random_points(5, 1);
    const KdTree<3> kd(pts);
    CHECK_THROWS_AS(kd.knn(Vec3::Zero(), 0), Error);
    CHECK_THROWS_AS(kd.knn(Vec3::Zero(), 6), Error);
    CHECK_NOTHROW(kd.knn(Vec3::Zero(), 5));
}

TEST_CASE("knn_of_point excludes the center") {
    const SyntheticCloud syn = plane_grid(10, 10, 1.0);
    const Neighborhood nb = knn_of_point(syn.cloud, 45, 8);
    CHECK(nb.members.size() == 8);
    for (auto m : nb.members) CHECK(m != 45);
    for (std::size_t j = 1; j < nb.distances.size(); ++j)
        CHECK(nb.distances[j - 1] <= nb.distances[j]);
}

TEST_CASE("estimate_normal recovers the plane normal") {
    SyntheticCloud syn = plane_grid(15, 15, 1.0, 0.2, 5);
    for (std::uint32_t i : {std::uint32_t(50), std::uint32_t(112)}) {
        const Vec3 n = estimate_normal(syn.cloud, i, 12);
        CHECK(std::abs(n.z()) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("compute_normals orients a sphere cap outward") {
    SyntheticCloud syn = sphere_cap(50.0, 15.0, 1.0);
    PointCloud cloud(syn.cloud.points()); // drop the exact normals
    compute_normals(cloud, 12);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3 exact = cloud.point(i).normalized();
        CHECK(cloud.normal(i).dot(exact) > 0.95);
    }
}

TEST_CASE("classify_boundary finds the grid rim") {
    SyntheticCloud syn = plane_grid(20, 20, 1.0, 0.2, 9);
    PointCloud cloud(syn.cloud.points());
    classify_boundary(cloud, 12, kDefaultGapThreshold);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (cloud.tag(i) != syn.cloud.tag(i)) ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("fair keeps the boundary and flattens jitter") {
    SyntheticCloud syn = plane_grid(15, 15, 1.0, 0.2, 13);
    const WeightSet weights = build_laplacian(syn.cloud, 12);
    const PointCloud faired = fair(syn.cloud, weights, 3, 0.5);
    REQUIRE(faired.size() == syn.cloud.size());
    for (std::size_t i = 0; i < faired.size(); ++i) {
        if (syn.cloud.tag(i) == PointTag::Boundary)
            CHECK((faired.point(i) - syn.cloud.point(i)).norm() == 0.0);
        CHECK(std::abs(faired.point(i).z()) < 1e-12); // in-plane smoothing
    }
}

TEST_CASE("point cloud rejects non-finite input") {
    std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, std::nan("")}};
    CHECK_THROWS_AS(PointCloud{pts}, Error);
}
