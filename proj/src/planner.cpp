#include "isopath/planner.hpp"

#include "isopath/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isopath {

void ToolConfig::validate() const {
    if (!(cutter_radius > 0.0))
        throw Error(ErrorCode::InvalidArgument, "cutter radius must be positive");
    if (!(scallop_limit > 0.0 && scallop_limit < cutter_radius))
        throw Error(ErrorCode::InvalidArgument,
                    "scallop limit must satisfy 0 < h < cutter radius");
    if (!(chord_limit > 0.0))
        throw Error(ErrorCode::InvalidArgument, "chord limit must be positive");
    if (boundary_band_paths < 3 || boundary_band_paths > 5)
        throw Error(ErrorCode::InvalidArgument,
                    "boundary band paths must be in [3, 5]");
    if (!(max_step_fraction > 0.0 && max_step_fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument,
                    "max step fraction must be in (0, 1]");
    if (knn < 3)
        throw Error(ErrorCode::InvalidArgument, "knn must be >= 3");
}

double forward_interval(const CurvatureRadius& radius, double chord_limit,
                        double flat_cap) {
    if (!(chord_limit > 0.0))
        throw Error(ErrorCode::InvalidArgument, "chord limit must be positive");
    if (radius.flat) return flat_cap;
    const double disc =
        8.0 * chord_limit * radius.radius - 4.0 * chord_limit * chord_limit;
    if (!(disc > 0.0))
        throw Error(ErrorCode::InvalidCurvature,
                    "forward interval: curvature radius " +
                        std::to_string(radius.radius) +
                        " mm is below half the chord limit");
    return std::sqrt(disc);
}

double side_interval(const CurvatureRadius& radius, double scallop_limit,
                     double cutter_radius) {
    if (!(scallop_limit > 0.0 && scallop_limit < cutter_radius))
        throw Error(ErrorCode::InvalidArgument,
                    "side interval: need 0 < h < cutter radius");
    const double hr8 = 8.0 * scallop_limit * cutter_radius;
    if (radius.flat) return std::sqrt(hr8);
    const double R = radius.radius;
    if (radius.convexity == Convexity::Concave) {
        if (!(R > cutter_radius))
            throw Error(ErrorCode::Gouging,
                        "side interval: concave radius " + std::to_string(R) +
                            " mm does not admit a cutter of radius " +
                            std::to_string(cutter_radius) + " mm");
        return std::sqrt(hr8 * R / (R - cutter_radius));
    }
    return std::sqrt(hr8 * R / (R + cutter_radius));
}

double forward_step(const DerivativeSample& sample, const ToolConfig& cfg,
                    double forward_extent) {
    const double rv = sample.r_v.norm();
    if (!(rv > 0.0))
        throw Error(ErrorCode::DegenerateGeometry,
                    "forward step: |r_v| vanishes");
    const double cap_param = cfg.max_step_fraction * forward_extent;
    const double lf = forward_interval(
        curvature_radius(sample, CurvatureDirection::V, cfg.sign),
        cfg.chord_limit, cap_param * sample.sigma);
    return std::min(lf / rv, cap_param);
}

double side_step_interior(const DerivativeSample& sample, const ToolConfig& cfg) {
    const double ru = sample.r_u.norm();
    if (!(ru > 0.0))
        throw Error(ErrorCode::DegenerateGeometry, "side step: |r_u| vanishes");
    const double ls =
        side_interval(curvature_radius(sample, CurvatureDirection::U, cfg.sign),
                      cfg.scallop_limit, cfg.cutter_radius);
    return ls / ru;
}

double side_step_boundary(const DerivativeSample& sample, double mean_curv,
                          const ToolConfig& cfg) {
    const double ru = sample.r_u.norm();
    if (!(ru > 0.0))
        throw Error(ErrorCode::DegenerateGeometry, "side step: |r_u| vanishes");
    const double dev = std::abs(sample.theta - M_PI / 2.0);
    if (!(dev < M_PI / 2.0 - 1e-9))
        throw Error(ErrorCode::DegenerateGeometry,
                    "side step: coordinate frame collapsed (r_u parallel to r_v)");
    const double kf = sample.n / sample.g;
    const double ks = 2.0 * mean_curv - kf;
    CurvatureRadius radius;
    if (std::abs(ks) < 1e-10) {
        radius.flat = true;
        radius.radius = std::numeric_limits<double>::infinity();
    } else {
        radius.radius = 1.0 / std::abs(ks);
        radius.convexity = ((ks < 0.0) == cfg.sign.convex_when_negative)
                               ? Convexity::Convex
                               : Convexity::Concave;
    }
    const double ls = side_interval(radius, cfg.scallop_limit, cfg.cutter_radius);
    return ls / (std::cos(dev) * ru);
}

namespace {

constexpr std::size_t kMaxPathPoints = 1u << 20;

template <typename StepFn>
double min_step_over_path(const ToolPath& path, Execution exec, StepFn&& fn) {
    std::vector<double> steps(path.points.size(),
                              std::numeric_limits<double>::infinity());
    std::vector<std::string> failures(path.points.size());
    for_each_index(path.points.size(), exec, [&](std::size_t i) {
        try {
            steps[i] = fn(path.points[i]);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw Error(ErrorCode::DegenerateGeometry, failures[i]);
    return *std::min_element(steps.begin(), steps.end());
}

[[noreturn]] void rethrow_with_path(const Error& e, int path_index) {
    throw Error(e.code(), "path " + std::to_string(path_index) + ": " + e.what());
}

} // namespace

std::vector<ToolPath> plan_direction_parallel(const Interpolator& interp,
                                              const ToolConfig& cfg) {
    cfg.validate();
    const Domain& dom = interp.param().domain;
    if (dom.kind != Domain::Kind::Rect)
        throw Error(ErrorCode::InvalidArgument,
                    "direction-parallel planning requires a rectangle domain");
    if (interp.cloud().size() < cfg.knn + 1)
        throw Error(ErrorCode::TooSparse,
                    "cloud too sparse to plan a path (need > knn points)");
    const double a = dom.a, b = dom.b;
    const double tiny = 1e-9 * std::max(a, b);
    const Execution exec = Execution::Parallel;

    auto make_path = [&](double u) {
        ToolPath path;
        path.pattern = PathPattern::DirectionParallel;
        double v = 0.0;
        path.points.push_back({interp.at({u, 0.0}), {u, 0.0}});
        for (;;) {
            if (path.points.size() > kMaxPathPoints)
                throw Error(ErrorCode::SolverFailure,
                            "forward stepping did not terminate");
            const DerivativeSample s = sample_at_preimage(interp, {u, v});
            const double dv = forward_step(s, cfg, b);
            if (v + dv >= b - tiny) {
                path.points.push_back({interp.at({u, b}), {u, b}});
                return path;
            }
            v += dv;
            path.points.push_back({interp.at({u, v}), {u, v}});
        }
    };
    auto boundary_min_step = [&](const ToolPath& prev) {
        return min_step_over_path(prev, exec, [&](const PathPoint& p) {
            const DerivativeSample s = sample_at_preimage(interp, p.preimage);
            const double h =
                mean_curvature(interp.cloud(), interp.nearest_point(p.preimage),
                               cfg.knn);
            return side_step_boundary(s, h, cfg);
        });
    };
    auto interior_min_step = [&](const ToolPath& prev) {
        return min_step_over_path(prev, exec, [&](const PathPoint& p) {
            return side_step_interior(sample_at_preimage(interp, p.preimage),
                                      cfg);
        });
    };

    std::vector<ToolPath> left, right, mid;
    int emitted = 0;
    try {
        // Stage 1: boundary bands from both sides with the projected
        // (near-boundary) step formula.
        left.push_back(make_path(0.0));
        ++emitted;
        double u_left = 0.0;
        for (int i = 1; i < cfg.boundary_band_paths; ++i) {
            const double s = boundary_min_step(left.back());
            if (u_left + s >= a - tiny) break;
            u_left += s;
            left.push_back(make_path(u_left));
            ++emitted;
        }
        right.push_back(make_path(a));
        ++emitted;
        double u_right = a;
        for (int i = 1; i < cfg.boundary_band_paths; ++i) {
            const double s = boundary_min_step(right.back());
            if (u_right - s <= u_left + tiny) break;
            u_right -= s;
            right.push_back(make_path(u_right));
            ++emitted;
        }
        // Stage 2: fill the narrowed band with the interior formula. A
        // collapsed band means the boundary paths already cover the domain.
        if (u_left < u_right) {
            const ToolPath* prev = &left.back();
            double u = u_left;
            for (;;) {
                const double s = interior_min_step(*prev);
                if (u + s >= u_right - tiny) break;
                u += s;
                mid.push_back(make_path(u));
                ++emitted;
                prev = &mid.back();
            }
        }
    } catch (const Error& e) {
        rethrow_with_path(e, emitted);
    }

    std::vector<ToolPath> out;
    out.reserve(left.size() + mid.size() + right.size());
    for (auto& p : left) {
        p.stage = PathStage::BandLow;
        out.push_back(std::move(p));
    }
    for (auto& p : mid) {
        p.stage = PathStage::Fill;
        out.push_back(std::move(p));
    }
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
        it->stage = PathStage::BandHigh;
        out.push_back(std::move(*it));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    return out;
}

std::vector<ToolPath> plan_contour_parallel(const Interpolator& interp,
                                            const ToolConfig& cfg) {
    cfg.validate();
    const Domain& dom = interp.param().domain;
    if (dom.kind != Domain::Kind::Disk)
        throw Error(ErrorCode::InvalidArgument,
                    "contour-parallel planning requires a disk domain");
    if (interp.cloud().size() < cfg.knn + 1)
        throw Error(ErrorCode::TooSparse,
                    "cloud too sparse to plan a path (need > knn points)");
    const double r0 = dom.r0;
    const double two_pi = 2.0 * M_PI;
    const double tiny = 1e-9 * r0;
    const Execution exec = Execution::Parallel;

    auto make_ring = [&](double rho) {
        ToolPath path;
        path.pattern = PathPattern::ContourParallel;
        auto at_polar = [&](double theta) {
            return interp.at({rho * std::cos(theta), rho * std::sin(theta)});
        };
        double theta = 0.0;
        path.points.push_back({at_polar(0.0), {rho, 0.0}});
        for (;;) {
            if (path.points.size() > kMaxPathPoints)
                throw Error(ErrorCode::SolverFailure,
                            "forward stepping did not terminate");
            const DerivativeSample s = sample_at_preimage(interp, {rho, theta});
            const double dtheta = forward_step(s, cfg, two_pi);
            if (theta + dtheta >= two_pi - 1e-12) {
                path.points.push_back({at_polar(two_pi), {rho, two_pi}});
                return path;
            }
            theta += dtheta;
            path.points.push_back({at_polar(theta), {rho, theta}});
        }
    };
    auto boundary_min_step = [&](const ToolPath& prev) {
        return min_step_over_path(prev, exec, [&](const PathPoint& p) {
            const double rho = p.preimage.x(), theta = p.preimage.y();
            const DerivativeSample s = sample_at_preimage(interp, {rho, theta});
            const Vec2 q(rho * std::cos(theta), rho * std::sin(theta));
            const double h =
                mean_curvature(interp.cloud(), interp.nearest_point(q), cfg.knn);
            return side_step_boundary(s, h, cfg);
        });
    };
    auto interior_min_step = [&](const ToolPath& prev) {
        return min_step_over_path(prev, exec, [&](const PathPoint& p) {
            return side_step_interior(sample_at_preimage(interp, p.preimage),
                                      cfg);
        });
    };

    std::vector<ToolPath> bands, inner;
    int emitted = 0;
    bool collapsed = false;
    try {
        // Stage 1: rings morphing inward from the boundary circle.
        bands.push_back(make_ring(r0));
        ++emitted;
        double rho = r0;
        for (int i = 1; i < cfg.boundary_band_paths; ++i) {
            const double s = boundary_min_step(bands.back());
            if (rho - s <= tiny) {
                collapsed = true;
                break;
            }
            rho -= s;
            bands.push_back(make_ring(rho));
            ++emitted;
        }
        const double r_inner = rho; // narrowed domain boundary R'

        // Stage 2: outward from the center. The first path is the center
        // point itself; its step is the minimum over a fan of directions.
        if (!collapsed && r_inner > tiny) {
            ToolPath center;
            center.pattern = PathPattern::ContourParallel;
            center.points.push_back({interp.at({0.0, 0.0}), {0.0, 0.0}});
            inner.push_back(std::move(center));
            ++emitted;

            constexpr int kFanDirections = 16;
            double fan_min = std::numeric_limits<double>::infinity();
            for (int f = 0; f < kFanDirections; ++f) {
                const double phi = two_pi * f / kFanDirections;
                const DerivativeSample s =
                    derivatives(interp, Chart::rotated({0.0, 0.0}, phi));
                fan_min = std::min(fan_min, side_step_interior(s, cfg));
            }
            double r = fan_min;
            const ToolPath* prev = nullptr;
            while (r < r_inner - tiny) {
                inner.push_back(make_ring(r));
                ++emitted;
                prev = &inner.back();
                const double s = interior_min_step(*prev);
                r += s;
            }
        }
    } catch (const Error& e) {
        rethrow_with_path(e, emitted);
    }

    std::vector<ToolPath> out;
    out.reserve(inner.size() + bands.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        inner[i].stage = i == 0 ? PathStage::Center : PathStage::Fill;
        out.push_back(std::move(inner[i]));
    }
    for (auto it = bands.rbegin(); it != bands.rend(); ++it) {
        it->stage = PathStage::BandHigh;
        out.push_back(std::move(*it));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    return out;
}

std::vector<ToolPath> plan(const Interpolator& interp, const ToolConfig& cfg) {
    return interp.param().domain.kind == Domain::Kind::Rect
               ? plan_direction_parallel(interp, cfg)
               : plan_contour_parallel(interp, cfg);
}

} // namespace isopath
