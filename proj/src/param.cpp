#include "isopath/param.hpp"

#include "isopath/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace isopath {

Vec2 Parameterization::polar(std::size_t i) const {
    const Vec2& q = uv[i];
    double theta = std::atan2(q.y(), q.x());
    if (theta < 0) theta += 2.0 * M_PI;
    return {q.norm(), theta};
}

namespace {

struct LocalBoundary {
    std::vector<std::uint32_t> global; // boundary point -> cloud index
    std::vector<Vec3> pts;
    KdTree<3> kd;
    std::map<std::uint32_t, std::uint32_t> to_local;
};

LocalBoundary collect_boundary(const PointCloud& cloud) {
    LocalBoundary lb;
    for (std::uint32_t i = 0; i < cloud.size(); ++i)
        if (cloud.tag(i) == PointTag::Boundary) {
            lb.to_local[i] = static_cast<std::uint32_t>(lb.global.size());
            lb.global.push_back(i);
            lb.pts.push_back(cloud.point(i));
        }
    lb.kd = KdTree<3>(lb.pts);
    return lb;
}

std::vector<std::vector<std::uint32_t>>
symmetric_knn_graph(const LocalBoundary& lb, std::size_t k) {
    const std::size_t n = lb.pts.size();
    std::vector<std::set<std::uint32_t>> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto hits = lb.kd.knn(lb.pts[i], std::min(k, n - 1),
                              static_cast<std::int64_t>(i));
        for (const auto& h : hits) {
            if (h.dist == 0.0)
                throw Error(ErrorCode::InvalidInput,
                            "order_boundary: duplicate boundary points");
            sets[i].insert(h.index);
            sets[h.index].insert(static_cast<std::uint32_t>(i));
        }
    }
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        adj[i].assign(sets[i].begin(), sets[i].end());
    return adj;
}

} // namespace

BoundaryLoop order_boundary(const PointCloud& cloud,
                            const std::vector<std::uint32_t>& breaks,
                            std::size_t boundary_knn) {
    if (breaks.size() < 2)
        throw Error(ErrorCode::InvalidInput,
                    "order_boundary: need at least 2 break points");
    {
        std::set<std::uint32_t> uniq(breaks.begin(), breaks.end());
        if (uniq.size() != breaks.size())
            throw Error(ErrorCode::InvalidInput,
                        "order_boundary: duplicate break points");
    }
    for (auto b : breaks) {
        if (b >= cloud.size() || cloud.tag(b) != PointTag::Boundary)
            throw Error(ErrorCode::InvalidInput,
                        "order_boundary: break point " + std::to_string(b) +
                            " is not tagged Boundary");
    }

    const LocalBoundary lb = collect_boundary(cloud);
    const std::size_t nb = lb.pts.size();
    const std::size_t B = breaks.size();
    std::vector<std::uint32_t> lbreak(B);
    std::vector<char> is_break(nb, 0);
    for (std::size_t p = 0; p < B; ++p) {
        lbreak[p] = lb.to_local.at(breaks[p]);
        is_break[lbreak[p]] = 1;
    }

    // Part membership: components of the tight (2-NN) graph with breaks
    // removed; each component must sit between two consecutive breaks.
    const auto adj2 = symmetric_knn_graph(lb, 2);
    std::vector<std::int32_t> comp(nb, -1);
    std::int32_t ncomp = 0;
    for (std::size_t s = 0; s < nb; ++s) {
        if (comp[s] >= 0 || is_break[s]) continue;
        std::deque<std::uint32_t> q{static_cast<std::uint32_t>(s)};
        comp[s] = ncomp;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (auto v : adj2[u])
                if (comp[v] < 0 && !is_break[v]) {
                    comp[v] = ncomp;
                    q.push_back(v);
                }
        }
        ++ncomp;
    }
    std::vector<std::set<std::uint32_t>> comp_breaks(ncomp); // break ordinals touching comp
    for (std::size_t p = 0; p < B; ++p)
        for (auto v : adj2[lbreak[p]])
            if (!is_break[v]) comp_breaks[comp[v]].insert(static_cast<std::uint32_t>(p));

    std::vector<std::vector<std::uint32_t>> part_members(B);
    if (B == 2) {
        if (ncomp > 2)
            throw Error(ErrorCode::Topology,
                        "order_boundary: boundary splits into more than 2 chains "
                        "between the 2 break points");
        if (ncomp == 2) {
            // Deterministic arc assignment: part 1 holds the first neighbor
            // of break 1.
            std::int32_t first = -1;
            for (auto v : adj2[lbreak[0]])
                if (!is_break[v]) {
                    first = comp[v];
                    break;
                }
            if (first < 0)
                throw Error(ErrorCode::Topology,
                            "order_boundary: break point is isolated");
            for (std::size_t i = 0; i < nb; ++i)
                if (!is_break[i])
                    part_members[comp[i] == first ? 0 : 1].push_back(
                        static_cast<std::uint32_t>(i));
        } else if (ncomp == 1) {
            for (std::size_t i = 0; i < nb; ++i)
                if (!is_break[i]) part_members[0].push_back(static_cast<std::uint32_t>(i));
        }
    } else {
        for (std::int32_t c = 0; c < ncomp; ++c) {
            const auto& cb = comp_breaks[c];
            if (cb.size() != 2)
                throw Error(ErrorCode::Topology,
                            "order_boundary: a boundary chain touches " +
                                std::to_string(cb.size()) +
                                " break points, expected 2 (part disconnected "
                                "or breaks misplaced)");
            const std::uint32_t p0 = *cb.begin(), p1 = *cb.rbegin();
            std::size_t part;
            if ((p0 + 1) % B == p1)
                part = p0;
            else if ((p1 + 1) % B == p0)
                part = p1;
            else
                throw Error(ErrorCode::Topology,
                            "order_boundary: a boundary chain spans non-adjacent "
                            "break points");
            for (std::size_t i = 0; i < nb; ++i)
                if (comp[i] == c) part_members[part].push_back(static_cast<std::uint32_t>(i));
        }
    }

    // Harmonic ordering per part: inverse-distance weights on the 4-NN
    // graph, end breaks fixed at 0 and 1.
    const auto adj4 = symmetric_knn_graph(lb, std::max<std::size_t>(boundary_knn, 2));
    BoundaryLoop loop;
    for (std::size_t p = 0; p < B; ++p) {
        const std::uint32_t b0 = lbreak[p], b1 = lbreak[(p + 1) % B];
        const auto& members = part_members[p];
        std::vector<double> value(members.size(), 0.0);
        if (!members.empty()) {
            std::map<std::uint32_t, std::size_t> unknown;
            for (std::size_t i = 0; i < members.size(); ++i) unknown[members[i]] = i;
            const std::size_t m = members.size();
            Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
            for (std::size_t i = 0; i < m; ++i) {
                const std::uint32_t li = members[i];
                double wsum = 0.0;
                std::vector<std::pair<std::uint32_t, double>> nbrs;
                for (auto j : adj4[li]) {
                    if (j != b0 && j != b1 && !unknown.count(j)) continue;
                    const double d = (lb.pts[li] - lb.pts[j]).norm();
                    if (d == 0.0)
                        throw Error(ErrorCode::InvalidInput,
                                    "order_boundary: duplicate boundary points");
                    nbrs.push_back({j, 1.0 / d});
                    wsum += 1.0 / d;
                }
                if (nbrs.empty())
                    throw Error(ErrorCode::Topology,
                                "order_boundary: part " + std::to_string(p + 1) +
                                    " is disconnected in the boundary graph");
                for (auto [j, w] : nbrs) {
                    const double wn = w / wsum;
                    if (j == b1)
                        rhs(i) += wn;
                    else if (j != b0)
                        A(i, unknown.at(j)) -= wn;
                }
            }
            // Reachability from the fixed ends; a floating chain would make
            // the system singular.
            {
                std::vector<char> seen(m, 0);
                std::deque<std::size_t> q;
                for (std::size_t i = 0; i < m; ++i)
                    for (auto j : adj4[members[i]])
                        if (j == b0 || j == b1) {
                            if (!seen[i]) {
                                seen[i] = 1;
                                q.push_back(i);
                            }
                            break;
                        }
                while (!q.empty()) {
                    auto u = q.front();
                    q.pop_front();
                    for (auto j : adj4[members[u]])
                        if (unknown.count(j) && !seen[unknown.at(j)]) {
                            seen[unknown.at(j)] = 1;
                            q.push_back(unknown.at(j));
                        }
                }
                if (std::find(seen.begin(), seen.end(), 0) != seen.end())
                    throw Error(ErrorCode::Topology,
                                "order_boundary: part " + std::to_string(p + 1) +
                                    " is disconnected from its break points");
            }
            Eigen::VectorXd f = A.partialPivLu().solve(rhs);
            if (!f.allFinite())
                throw Error(ErrorCode::Topology,
                            "order_boundary: part ordering system is singular");
            for (std::size_t i = 0; i < m; ++i) value[i] = f(i);
        }
        std::vector<std::size_t> idx(members.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (value[a] != value[b]) return value[a] < value[b];
            return lb.global[members[a]] < lb.global[members[b]];
        });
        loop.break_pos.push_back(loop.order.size());
        loop.order.push_back(lb.global[b0]);
        for (auto i : idx) loop.order.push_back(lb.global[members[i]]);
    }

    // Chord lengths.
    loop.cum.resize(loop.order.size());
    loop.cum[0] = 0.0;
    for (std::size_t j = 1; j < loop.order.size(); ++j) {
        const double d =
            (cloud.point(loop.order[j]) - cloud.point(loop.order[j - 1])).norm();
        if (d == 0.0)
            throw Error(ErrorCode::InvalidInput,
                        "order_boundary: duplicate boundary points");
        loop.cum[j] = loop.cum[j - 1] + d;
    }
    const double closing =
        (cloud.point(loop.order.front()) - cloud.point(loop.order.back())).norm();
    loop.total = loop.cum.back() + closing;
    for (std::size_t p = 0; p < B; ++p) {
        const std::size_t s = loop.break_pos[p];
        const std::size_t e = (p + 1 < B) ? loop.break_pos[p + 1] : loop.order.size();
        const double start = loop.cum[s];
        const double end = (p + 1 < B) ? loop.cum[e] : loop.total;
        loop.part_length.push_back(end - start);
        (void)e;
    }
    return loop;
}

BoundaryMap map_boundary_disk(const PointCloud& cloud, const BoundaryLoop& loop) {
    (void)cloud;
    if (loop.order.empty())
        throw Error(ErrorCode::InvalidInput, "map_boundary_disk: empty loop");
    if (!(loop.total > 0.0))
        throw Error(ErrorCode::InvalidInput,
                    "map_boundary_disk: boundary has zero length");
    BoundaryMap bm;
    bm.domain.kind = Domain::Kind::Disk;
    bm.domain.r0 = loop.total / (2.0 * M_PI);
    for (std::size_t j = 0; j < loop.order.size(); ++j) {
        const double lambda = loop.cum[j] / loop.total;
        const double theta = 2.0 * M_PI * lambda;
        bm.indices.push_back(loop.order[j]);
        bm.uv.push_back(bm.domain.r0 * Vec2(std::cos(theta), std::sin(theta)));
    }
    return bm;
}

BoundaryMap map_boundary_rect(const PointCloud& cloud, const BoundaryLoop& loop) {
    (void)cloud;
    if (loop.parts() != 4)
        throw Error(ErrorCode::InvalidInput,
                    "map_boundary_rect: rectangle mapping requires exactly 4 "
                    "parts (4 break points), got " +
                        std::to_string(loop.parts()));
    for (double l : loop.part_length)
        if (!(l > 0.0))
            throw Error(ErrorCode::InvalidInput,
                        "map_boundary_rect: a boundary part has zero length");
    BoundaryMap bm;
    bm.domain.kind = Domain::Kind::Rect;
    const double a = (loop.part_length[0] + loop.part_length[2]) / 2.0;
    const double b = (loop.part_length[1] + loop.part_length[3]) / 2.0;
    bm.domain.a = a;
    bm.domain.b = b;
    for (std::size_t j = 0; j < loop.order.size(); ++j) {
        std::size_t p = 3;
        while (p > 0 && loop.break_pos[p] > j) --p;
        const double lambda =
            (loop.cum[j] - loop.cum[loop.break_pos[p]]) / loop.part_length[p];
        Vec2 q;
        switch (p) {
        case 0: q = {lambda * a, 0.0}; break;
        case 1: q = {a, lambda * b}; break;
        case 2: q = {a - lambda * a, b}; break;
        default: q = {0.0, b - lambda * b}; break;
        }
        bm.indices.push_back(loop.order[j]);
        bm.uv.push_back(q);
    }
    return bm;
}

Parameterization solve_parameterization(const PointCloud& cloud,
                                        const WeightSet& weights,
                                        const BoundaryMap& boundary,
                                        const SolveOptions& solve) {
    const std::size_t n = cloud.size();
    std::vector<std::int64_t> interior_id(n, -1);
    std::vector<std::uint32_t> interior;
    for (std::uint32_t i = 0; i < n; ++i)
        if (cloud.tag(i) == PointTag::Interior) {
            interior_id[i] = static_cast<std::int64_t>(interior.size());
            interior.push_back(i);
        }

    std::vector<Vec2> uv(n, Vec2::Zero());
    std::vector<char> assigned(n, 0);
    for (std::size_t j = 0; j < boundary.indices.size(); ++j) {
        const std::uint32_t i = boundary.indices[j];
        if (cloud.tag(i) != PointTag::Boundary)
            throw Error(ErrorCode::InvalidInput,
                        "solve_parameterization: boundary map names a non-boundary "
                        "point");
        uv[i] = boundary.uv[j];
        assigned[i] = 1;
    }
    for (std::uint32_t i = 0; i < n; ++i)
        if (cloud.tag(i) == PointTag::Boundary && !assigned[i])
            throw Error(ErrorCode::InvalidInput,
                        "solve_parameterization: boundary point " +
                            std::to_string(i) + " has no planar image");

    const std::size_t r = interior.size();
    if (r == 0) return {boundary.domain, uv};

    // The interior system is only nonsingular when every interior point is
    // coupled to the boundary through the weight graph. A disconnected
    // component has a zero right-hand side, so its (singular) block would
    // "solve" to the origin with zero residual instead of failing.
    {
        std::vector<std::vector<std::uint32_t>> adj(r);
        std::vector<char> anchored(r, 0);
        for (std::size_t row = 0; row < r; ++row) {
            const std::uint32_t i = interior[row];
            if (!weights.has_row(i)) continue;
            for (const std::uint32_t j : weights.neighbors[i]) {
                if (interior_id[j] >= 0) {
                    adj[row].push_back(static_cast<std::uint32_t>(interior_id[j]));
                    adj[interior_id[j]].push_back(static_cast<std::uint32_t>(row));
                } else {
                    anchored[row] = 1;
                }
            }
        }
        std::deque<std::uint32_t> q;
        for (std::size_t row = 0; row < r; ++row)
            if (anchored[row]) q.push_back(static_cast<std::uint32_t>(row));
        while (!q.empty()) {
            const std::uint32_t u = q.front();
            q.pop_front();
            for (const std::uint32_t v : adj[u])
                if (!anchored[v]) {
                    anchored[v] = 1;
                    q.push_back(v);
                }
        }
        const auto stranded = static_cast<std::size_t>(
            std::count(anchored.begin(), anchored.end(), char(0)));
        if (stranded > 0)
            throw Error(ErrorCode::SolverFailure,
                        "solve_parameterization: " + std::to_string(stranded) +
                            " of " + std::to_string(r) +
                            " interior points are not connected to the boundary; "
                            "the Laplace system is singular");
    }

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(r, 2);
    for (std::size_t row = 0; row < r; ++row) {
        const std::uint32_t i = interior[row];
        if (!weights.has_row(i))
            throw Error(ErrorCode::InvalidInput,
                        "solve_parameterization: interior point " +
                            std::to_string(i) + " has no weight row");
        trip.emplace_back(row, row, 1.0);
        const auto& nbr = weights.neighbors[i];
        const auto& w = weights.weights[i];
        for (std::size_t jj = 0; jj < nbr.size(); ++jj) {
            const std::uint32_t j = nbr[jj];
            if (interior_id[j] >= 0)
                trip.emplace_back(row, interior_id[j], -w[jj]);
            else
                rhs.row(row) += w[jj] * uv[j].transpose();
        }
    }
    Eigen::SparseMatrix<double> A(r, r);
    A.setFromTriplets(trip.begin(), trip.end());
    const Eigen::MatrixXd x = solve_sparse(A, rhs, solve);
    for (std::size_t row = 0; row < r; ++row) uv[interior[row]] = x.row(row).transpose();
    return {boundary.domain, uv};
}

} // namespace isopath
