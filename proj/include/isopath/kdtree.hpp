#pragma once

#include "isopath/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace isopath {

/// Median-split k-d tree over fixed-dimension points. Queries are
/// read-only and safe to run concurrently.
template <int Dim>
class KdTree {
public:
    using Point = Eigen::Matrix<double, Dim, 1>;

    KdTree() = default;

    explicit KdTree(const std::vector<Point>& points) : pts_(points) {
        order_.resize(pts_.size());
        std::iota(order_.begin(), order_.end(), std::uint32_t{0});
        nodes_.reserve(pts_.size());
        if (!order_.empty()) root_ = build(0, order_.size());
    }

    std::size_t size() const { return pts_.size(); }

    struct Hit {
        std::uint32_t index;
        double dist;
    };

    /// k nearest points to `query`, ascending by distance. Ties are broken
    /// by coordinate lexicographic order so results do not depend on the
    /// order points were inserted. `exclude` removes one index (a query at
    /// an existing point asking for its neighbors).
    std::vector<Hit> knn(const Point& query, std::size_t k,
                         std::int64_t exclude = -1) const {
        const std::size_t avail = pts_.size() - (exclude >= 0 ? 1 : 0);
        if (k < 1 || k > avail)
            throw Error(ErrorCode::InvalidArgument,
                        "knn: k must be in [1, " + std::to_string(avail) + "], got " +
                            std::to_string(k));
        Search s{*this, query, k, exclude, {}};
        if (!order_.empty()) search(root_, s);
        std::sort(s.heap.begin(), s.heap.end(), [&](const Entry& a, const Entry& b) {
            if (a.d2 != b.d2) return a.d2 < b.d2;
            const Point &pa = pts_[a.idx], &pb = pts_[b.idx];
            for (int c = 0; c < Dim; ++c)
                if (pa[c] != pb[c]) return pa[c] < pb[c];
            return a.idx < b.idx;
        });
        std::vector<Hit> out;
        out.reserve(s.heap.size());
        for (const Entry& e : s.heap) out.push_back({e.idx, std::sqrt(e.d2)});
        return out;
    }

private:
    struct Node {
        std::uint32_t point;
        int axis;
        std::int32_t left = -1, right = -1;
    };

    std::int32_t build(std::size_t lo, std::size_t hi) {
        if (lo >= hi) return -1;
        // Split on the axis of largest spread.
        Point mn = pts_[order_[lo]], mx = mn;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            mn = mn.cwiseMin(pts_[order_[i]]);
            mx = mx.cwiseMax(pts_[order_[i]]);
        }
        int axis = 0;
        (mx - mn).maxCoeff(&axis);
        const std::size_t mid = (lo + hi) / 2;
        std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                         [&](std::uint32_t a, std::uint32_t b) {
                             return pts_[a][axis] < pts_[b][axis];
                         });
        Node n;
        n.point = order_[mid];
        n.axis = axis;
        const std::int32_t self = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(n);
        const std::int32_t l = build(lo, mid);
        const std::int32_t r = build(mid + 1, hi);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

    struct Entry {
        double d2;
        std::uint32_t idx;
    };

    struct Search {
        const KdTree& tree;
        Point query;
        std::size_t k;
        std::int64_t exclude;
        std::vector<Entry> heap; // max-heap by d2

        double worst() const {
            return heap.size() < k ? std::numeric_limits<double>::infinity()
                                   : heap.front().d2;
        }
        void offer(double d2, std::uint32_t idx) {
            if (static_cast<std::int64_t>(idx) == exclude) return;
            if (heap.size() < k) {
                heap.push_back({d2, idx});
                std::push_heap(heap.begin(), heap.end(),
                               [](const Entry& a, const Entry& b) { return a.d2 < b.d2; });
            } else if (d2 < heap.front().d2) {
                std::pop_heap(heap.begin(), heap.end(),
                              [](const Entry& a, const Entry& b) { return a.d2 < b.d2; });
                heap.back() = {d2, idx};
                std::push_heap(heap.begin(), heap.end(),
                               [](const Entry& a, const Entry& b) { return a.d2 < b.d2; });
            }
        }
    };

    void search(std::int32_t id, Search& s) const {
        if (id < 0) return;
        const Node& n = nodes_[id];
        const Point& p = pts_[n.point];
        s.offer((p - s.query).squaredNorm(), n.point);
        const double delta = s.query[n.axis] - p[n.axis];
        const std::int32_t near = delta <= 0 ? n.left : n.right;
        const std::int32_t far = delta <= 0 ? n.right : n.left;
        search(near, s);
        if (delta * delta <= s.worst()) search(far, s);
    }

    std::vector<Point> pts_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

} // namespace isopath
