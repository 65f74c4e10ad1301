#include "isopath/synthetic.hpp"
#include "isopath/weights.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace isopath;

TEST_CASE("optimal weights reproduce planar points exactly") {
    SyntheticCloud syn = plane_grid(21, 21, 1.0, 0.25, 7);
    const auto& cloud = syn.cloud;
    for (std::uint32_t i = 0; i < cloud.size(); ++i) {
        if (cloud.tag(i) != PointTag::Interior) continue;
        std::vector<std::uint32_t> nbr;
        const Eigen::VectorXd w = optimal_weights(cloud, i, 12, &nbr);
        REQUIRE(nbr.size() == 12);
        CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
        Vec3 recon = Vec3::Zero();
        for (int j = 0; j < w.size(); ++j) recon += w(j) * cloud.point(nbr[j]);
        CHECK((recon - cloud.point(i)).norm() <= 1e-9);
    }
}

TEST_CASE("optimal_weight_row handles a symmetric stencil") {
    // 4 axis-aligned unit offsets: the uniform average is optimal.
    Eigen::Matrix<double, 3, Eigen::Dynamic> diffs(3, 4);
    diffs.col(0) = Vec3(1, 0, 0);
    diffs.col(1) = Vec3(-1, 0, 0);
    diffs.col(2) = Vec3(0, 1, 0);
    diffs.col(3) = Vec3(0, -1, 0);
    const Eigen::VectorXd w = optimal_weight_row<3>(diffs);
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 0; j < 4; ++j) CHECK(w(j) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("build_laplacian rows cover exactly the interior") {
    SyntheticCloud syn = plane_grid(12, 12, 1.0, 0.2, 3);
    const WeightSet ws = build_laplacian(syn.cloud, 12);
    REQUIRE(ws.size() == syn.cloud.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const bool interior = syn.cloud.tag(i) == PointTag::Interior;
        CHECK(ws.has_row(i) == interior);
        if (!interior) continue;
        const double sum =
            std::accumulate(ws.weights[i].begin(), ws.weights[i].end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ws.fit_residual[i] <= 1e-9);
        for (auto j : ws.neighbors[i]) CHECK(j != i);
    }
}

TEST_CASE("residual stays small on a curved patch") {
    SyntheticCloud syn = sphere_cap(50.0, 15.0, 1.0, 0.1, 2);
    const WeightSet ws = build_laplacian(syn.cloud, 12);
    double worst = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws.has_row(i)) worst = std::max(worst, ws.fit_residual[i]);
    // Curved neighborhoods cannot reproduce exactly; the residual is the
    // out-of-tangent sag, well under the sample spacing.
    CHECK(worst < 0.1);
}
