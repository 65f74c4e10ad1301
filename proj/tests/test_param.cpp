#include "isopath/error.hpp"
#include "isopath/param.hpp"
#include "isopath/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace isopath;

TEST_CASE("order_boundary walks the grid rim in four equal parts") {
    SyntheticCloud syn = plane_grid(41, 41, 1.0);
    const BoundaryLoop loop = order_boundary(syn.cloud, syn.breaks);
    CHECK(loop.parts() == 4);
    CHECK(loop.order.size() == 160); // 4 * (41 - 1)
    CHECK(loop.total == doctest::Approx(160.0).epsilon(1e-12));
    for (double L : loop.part_length) CHECK(L == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(loop.order.front() == syn.breaks.front());
    for (std::size_t j = 1; j < loop.cum.size(); ++j)
        CHECK(loop.cum[j] > loop.cum[j - 1]);
}

TEST_CASE("map_boundary_rect spans the averaged part lengths") {
    SyntheticCloud syn = plane_grid(41, 31, 1.0);
    const BoundaryLoop loop = order_boundary(syn.cloud, syn.breaks);
    const BoundaryMap bm = map_boundary_rect(syn.cloud, loop);
    CHECK(bm.domain.kind == Domain::Kind::Rect);
    CHECK(bm.domain.a == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(bm.domain.b == doctest::Approx(30.0).epsilon(1e-12));
    REQUIRE(bm.indices.size() == loop.order.size());
    double umax = 0, vmax = 0;
    for (const Vec2& q : bm.uv) {
        CHECK(q.x() >= -1e-12);
        CHECK(q.y() >= -1e-12);
        umax = std::max(umax, q.x());
        vmax = std::max(vmax, q.y());
        // Every image lies on one of the four edges.
        const bool on_edge = std::abs(q.x()) < 1e-9 ||
                             std::abs(q.x() - bm.domain.a) < 1e-9 ||
                             std::abs(q.y()) < 1e-9 ||
                             std::abs(q.y() - bm.domain.b) < 1e-9;
        CHECK(on_edge);
    }
    CHECK(umax == doctest::Approx(bm.domain.a).epsilon(1e-12));
    CHECK(vmax == doctest::Approx(bm.domain.b).epsilon(1e-12));
}

TEST_CASE("map_boundary_rect requires four break points") {
    SyntheticCloud syn = plane_grid(21, 21, 1.0);
    std::vector<std::uint32_t> three(syn.breaks.begin(), syn.breaks.begin() + 3);
    const BoundaryLoop loop = order_boundary(syn.cloud, three);
    CHECK_THROWS_AS(map_boundary_rect(syn.cloud, loop), Error);
}

TEST_CASE("map_boundary_disk uses R0 = L / 2pi") {
    SyntheticCloud syn = disk_grid(20.0, 1.0);
    const BoundaryLoop loop = order_boundary(syn.cloud, syn.breaks);
    const BoundaryMap bm = map_boundary_disk(syn.cloud, loop);
    CHECK(bm.domain.kind == Domain::Kind::Disk);
    CHECK(bm.domain.r0 ==
          doctest::Approx(loop.total / (2.0 * M_PI)).epsilon(1e-12));
    for (const Vec2& q : bm.uv)
        CHECK(q.norm() == doctest::Approx(bm.domain.r0).epsilon(1e-12));
}

TEST_CASE("harmonic solve has linear precision on the plane") {
    SyntheticCloud syn = plane_grid(25, 25, 1.0, 0.2, 4);
    const WeightSet ws = build_laplacian(syn.cloud, 12);
    // Boundary images taken as the boundary points themselves (a similarity
    // map with scale 1): the harmonic extension must reproduce the interior.
    BoundaryMap bm;
    bm.domain.kind = Domain::Kind::Rect;
    bm.domain.a = 24.0;
    bm.domain.b = 24.0;
    for (std::uint32_t i = 0; i < syn.cloud.size(); ++i) {
        if (syn.cloud.tag(i) != PointTag::Boundary) continue;
        bm.indices.push_back(i);
        bm.uv.emplace_back(syn.cloud.point(i).x(), syn.cloud.point(i).y());
    }
    const Parameterization param = solve_parameterization(syn.cloud, ws, bm);
    REQUIRE(param.uv.size() == syn.cloud.size());
    for (std::size_t i = 0; i < param.uv.size(); ++i) {
        CHECK(std::abs(param.uv[i].x() - syn.cloud.point(i).x()) < 1e-6);
        CHECK(std::abs(param.uv[i].y() - syn.cloud.point(i).y()) < 1e-6);
    }
}

TEST_CASE("full rectangle parameterization of a flat grid is conformal") {
    SyntheticCloud syn = plane_grid(25, 25, 1.0, 0.15, 8);
    const WeightSet ws = build_laplacian(syn.cloud, 12);
    const BoundaryLoop loop = order_boundary(syn.cloud, syn.breaks);
    const BoundaryMap bm = map_boundary_rect(syn.cloud, loop);
    const Parameterization param = solve_parameterization(syn.cloud, ws, bm);
    const ConformalityReport rep = conformality_report(syn.cloud, param, 200);
    CHECK(rep.median_eg() < 0.05);
    CHECK(rep.median_theta_dev() < 10.0 * M_PI / 180.0);
}

TEST_CASE("polar accessor splits disk coordinates") {
    Parameterization p;
    p.domain.kind = Domain::Kind::Disk;
    p.domain.r0 = 2.0;
    p.uv = {Vec2(1.0, 1.0), Vec2(-2.0, 0.0)};
    CHECK(p.polar(0).x() == doctest::Approx(std::sqrt(2.0)));
    CHECK(p.polar(0).y() == doctest::Approx(M_PI / 4.0));
    CHECK(p.polar(1).y() == doctest::Approx(M_PI));
}
