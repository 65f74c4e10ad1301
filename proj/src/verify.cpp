#include "isopath/verify.hpp"

#include "isopath/error.hpp"
#include "isopath/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isopath {

namespace {

double point_to_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

Vec3 closest_on_polyline(const ToolPath& path, const Vec3& p) {
    const auto& pts = path.points;
    if (pts.size() == 1) return pts[0].position;
    double best = std::numeric_limits<double>::infinity();
    Vec3 out = pts[0].position;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const Vec3& a = pts[j].position;
        const Vec3 ab = pts[j + 1].position - a;
        const double len2 = ab.squaredNorm();
        const double t =
            len2 == 0.0 ? 0.0 : std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
        const Vec3 c = a + t * ab;
        const double d = (p - c).squaredNorm();
        if (d < best) {
            best = d;
            out = c;
        }
    }
    return out;
}

Vec3 forward_tangent(const ToolPath& path, std::size_t i) {
    const auto& pts = path.points;
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 < pts.size() ? i + 1 : i;
    return pts[hi].position - pts[lo].position;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0
                     : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what());
    }
}

} // namespace

std::vector<double> predicted_side_intervals(const ToolPath& path_a,
                                             const ToolPath& path_b,
                                             const Interpolator& interp) {
    if (path_a.points.empty() || path_b.points.empty())
        throw Error(ErrorCode::InvalidInput,
                    "predicted_side_intervals: empty path");
    const bool disk = interp.param().domain.kind == Domain::Kind::Disk;
    const double coord_b = path_b.points.front().preimage.x();
    std::vector<double> out(path_a.points.size());
    for (std::size_t i = 0; i < path_a.points.size(); ++i) {
        const Vec2& pre = path_a.points[i].preimage;
        const double du = std::abs(coord_b - pre.x());
        const DerivativeSample s = sample_at_preimage(interp, pre);
        // Polar charts carry mixed units (|r_v| = rho * conformal factor),
        // so the side-direction magnitude is used there instead of sigma.
        out[i] = du * (disk ? s.r_u.norm() : s.sigma);
    }
    return out;
}

std::vector<double> measured_side_intervals(const ToolPath& path_a,
                                            const ToolPath& path_b) {
    if (path_a.points.empty() || path_b.points.empty())
        throw Error(ErrorCode::InvalidInput,
                    "measured_side_intervals: empty path");
    std::vector<double> out(path_a.points.size());
    for (std::size_t i = 0; i < path_a.points.size(); ++i) {
        const Vec3& p = path_a.points[i].position;
        const Vec3 d = closest_on_polyline(path_b, p) - p;
        if (path_a.points.size() < 2) {
            out[i] = d.norm();
            continue;
        }
        Vec3 t = forward_tangent(path_a, i);
        const double tn = t.norm();
        if (tn == 0.0) {
            out[i] = d.norm();
            continue;
        }
        t /= tn;
        out[i] = (d - d.dot(t) * t).norm();
    }
    return out;
}

PathQualityReport side_interval_error(const ToolPath& path_a,
                                      const ToolPath& path_b,
                                      const std::vector<double>& targets,
                                      double tolerance_pct) {
    if (std::abs(path_a.index - path_b.index) != 1)
        throw Error(ErrorCode::InvalidInput,
                    "side_interval_error: paths " + std::to_string(path_a.index) +
                        " and " + std::to_string(path_b.index) +
                        " are not adjacent in the plan");
    if (targets.size() != path_a.points.size())
        throw Error(ErrorCode::InvalidArgument,
                    "side_interval_error: one target interval per point of the "
                    "first path is required");
    const std::vector<double> achieved = measured_side_intervals(path_a, path_b);
    PathQualityReport rep;
    rep.tolerance_pct = tolerance_pct;
    rep.epsilon.resize(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!(targets[i] > 0.0))
            throw Error(ErrorCode::InvalidArgument,
                        "side_interval_error: target intervals must be positive");
        rep.epsilon[i] = std::abs(targets[i] - achieved[i]) / targets[i] * 100.0;
    }
    rep.mean = mean_of(rep.epsilon);
    rep.max = *std::max_element(rep.epsilon.begin(), rep.epsilon.end());
    rep.min = *std::min_element(rep.epsilon.begin(), rep.epsilon.end());
    rep.scallop_error_mean = 2.0 * rep.mean;
    rep.pass = tolerance_pct <= 0.0 || rep.mean <= tolerance_pct;
    return rep;
}

double chord_deviation_audit(const ToolPath& path, const Interpolator& interp,
                             int samples_per_segment) {
    if (path.points.size() < 2)
        throw Error(ErrorCode::InvalidInput,
                    "chord_deviation_audit: path needs at least 2 points");
    if (samples_per_segment < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "chord_deviation_audit: need at least 1 sample per segment");
    const bool disk = interp.param().domain.kind == Domain::Kind::Disk;
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < path.points.size(); ++j) {
        const PathPoint& a = path.points[j];
        const PathPoint& b = path.points[j + 1];
        for (int s = 1; s <= samples_per_segment; ++s) {
            const double t = static_cast<double>(s) / (samples_per_segment + 1);
            const Vec2 pre = (1.0 - t) * a.preimage + t * b.preimage;
            const Vec2 q = disk ? Vec2(pre.x() * std::cos(pre.y()),
                                       pre.x() * std::sin(pre.y()))
                                : pre;
            worst = std::max(
                worst, point_to_segment(interp.at(q), a.position, b.position));
        }
    }
    return worst;
}

namespace {

bool is_seam(const ToolPath& a, const ToolPath& b) {
    return b.stage == PathStage::BandHigh && a.stage != PathStage::BandHigh;
}

bool near_boundary_pair(const ToolPath& a, const ToolPath& b) {
    const auto banded = [](const ToolPath& p) {
        return p.stage == PathStage::BandLow || p.stage == PathStage::BandHigh;
    };
    return banded(a) || banded(b);
}

} // namespace

RegressionResult analytic_regression(AnalyticSurface surface, double radius,
                                     const ToolConfig& cfg) {
    cfg.validate();
    const bool contour = cfg.pattern == PathPattern::ContourParallel;
    if (contour && surface != AnalyticSurface::Plane)
        throw Error(ErrorCode::InvalidArgument,
                    "analytic_regression: the contour pattern is exercised on "
                    "the flat disk only");
    if (surface != AnalyticSurface::Plane && !(radius > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "analytic_regression: radius must be positive");

    SyntheticCloud syn = run_stage("synthesize", [&] {
        switch (surface) {
        case AnalyticSurface::Plane:
            return contour ? disk_grid(20.0, 1.0) : plane_grid(41, 41, 1.0);
        case AnalyticSurface::Sphere:
            return sphere_cap(radius, 0.44 * radius, 0.02 * radius);
        default:
            // The chord audit is gated at 1.05e; the audit's noise floor is
            // the interpolation sag, so the cylinder is sampled densely.
            return cylinder_patch(radius, 0.8, 1.6 * radius, 0.01 * radius);
        }
    });
    const PointCloud& cloud = syn.cloud;
    const WeightSet weights =
        run_stage("weights", [&] { return build_laplacian(cloud, cfg.knn); });
    const BoundaryLoop loop =
        run_stage("boundary order", [&] { return order_boundary(cloud, syn.breaks); });
    const BoundaryMap bm = run_stage("boundary map", [&] {
        return contour ? map_boundary_disk(cloud, loop)
                       : map_boundary_rect(cloud, loop);
    });
    const Parameterization param = run_stage("parameterize", [&] {
        return solve_parameterization(cloud, weights, bm);
    });
    const Interpolator interp(cloud, param, cfg.knn);
    const std::vector<ToolPath> paths =
        run_stage("plan", [&] { return plan(interp, cfg); });

    RegressionResult res;
    const auto add_check = [&](const std::string& name, double value,
                               double limit, bool pass) {
        res.checks.push_back({name, pass, value, limit});
        res.pass = res.pass && pass;
    };

    if (contour)
        add_check("center path is a single point",
                  static_cast<double>(paths.front().points.size()), 1.0,
                  paths.front().stage == PathStage::Center &&
                      paths.front().points.size() == 1);

    // Side-interval errors over every stepped-offset pair; the single seam
    // pair, where the two planning fronts meet at a residual gap, is not a
    // stepped offset and is excluded.
    std::vector<double> interior_eps, boundary_eps, flat_spacing;
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
        const ToolPath& a = paths[i];
        const ToolPath& b = paths[i + 1];
        if (is_seam(a, b)) continue;
        const std::vector<double> targets =
            run_stage("predict", [&] { return predicted_side_intervals(a, b, interp); });
        PathQualityReport rep = side_interval_error(a, b, targets);
        auto& bucket = near_boundary_pair(a, b) ? boundary_eps : interior_eps;
        bucket.insert(bucket.end(), rep.epsilon.begin(), rep.epsilon.end());
        if (surface == AnalyticSurface::Plane) {
            const auto achieved = measured_side_intervals(a, b);
            flat_spacing.insert(flat_spacing.end(), achieved.begin(),
                                achieved.end());
        }
        res.side_reports.push_back(std::move(rep));
    }
    if (!interior_eps.empty())
        add_check("interior side-interval error mean (%)", mean_of(interior_eps),
                  5.0, mean_of(interior_eps) <= 5.0);
    if (!boundary_eps.empty())
        add_check("near-boundary side-interval error mean (%)",
                  mean_of(boundary_eps), 8.0, mean_of(boundary_eps) <= 8.0);

    if (surface == AnalyticSurface::Plane && !flat_spacing.empty()) {
        const double ideal =
            std::sqrt(8.0 * cfg.scallop_limit * cfg.cutter_radius);
        const double lo =
            *std::min_element(flat_spacing.begin(), flat_spacing.end());
        const double hi =
            *std::max_element(flat_spacing.begin(), flat_spacing.end());
        add_check("flat spacing lower bound (mm)", lo, 0.95 * ideal,
                  lo >= 0.95 * ideal - 1e-9);
        add_check("flat spacing upper bound (mm)", hi, ideal,
                  hi <= ideal * (1.0 + 1e-9));
    }

    // All planned points must lie on the analytic surface up to the
    // interpolation sag of the sampling density.
    double surf_dev = 0.0;
    for (const ToolPath& p : paths)
        for (const PathPoint& pt : p.points) {
            double d = 0.0;
            switch (surface) {
            case AnalyticSurface::Plane:
                d = std::abs(pt.position.z());
                break;
            case AnalyticSurface::Sphere:
                d = std::abs(pt.position.norm() - radius);
                break;
            default:
                d = std::abs(std::hypot(pt.position.x(), pt.position.z()) -
                             radius);
                break;
            }
            surf_dev = std::max(surf_dev, d);
        }
    const double dev_limit =
        surface == AnalyticSurface::Plane ? 1e-7 : 3e-3 * radius;
    add_check("surface deviation max (mm)", surf_dev, dev_limit,
              surf_dev <= dev_limit);

    // Chord audit: gated where the forward direction crosses the analytic
    // curvature (cylinder) or is trivially straight (flat rows); flat-disk
    // rings and sphere iso-curves carry in-surface curvature the forward
    // bound does not govern, so they are reported unaudited.
    if (!contour) {
        for (const ToolPath& p : paths)
            res.chord_max = std::max(
                res.chord_max, chord_deviation_audit(p, interp, 16));
        if (surface != AnalyticSurface::Sphere)
            add_check("chord deviation max (mm)", res.chord_max,
                      1.05 * cfg.chord_limit,
                      res.chord_max <= 1.05 * cfg.chord_limit);
    }

    if (surface == AnalyticSurface::Sphere) {
        const Domain& dom = param.domain;
        std::size_t total = 0, good = 0;
        for (const ToolPath& p : paths)
            for (const PathPoint& pt : p.points) {
                const Vec2& pre = pt.preimage;
                if (pre.x() < 0.2 * dom.a || pre.x() > 0.8 * dom.a ||
                    pre.y() < 0.2 * dom.b || pre.y() > 0.8 * dom.b)
                    continue;
                ++total;
                const CurvatureRadius cr = curvature_radius(
                    sample_at_preimage(interp, pre), CurvatureDirection::V,
                    cfg.sign);
                if (!cr.flat && std::abs(cr.radius - radius) <= 0.1 * radius)
                    ++good;
            }
        const double frac = total == 0 ? 0.0 : double(good) / double(total);
        add_check("forward radius within 10% (fraction)", frac, 0.9,
                  total > 0 && frac >= 0.9);
    }

    for (const PathQualityReport& rep : res.side_reports)
        res.pass = res.pass && rep.pass;
    return res;
}

} // namespace isopath
