#pragma once

#include "isopath/param.hpp"

#include <cstdint>
#include <optional>

namespace isopath {

/// Maps parametric points back to 3D by optimal-weight linear
/// interpolation over the k nearest parameter images. Pure queries,
/// safe to share across threads.
class Interpolator {
public:
    Interpolator(const PointCloud& cloud, const Parameterization& param,
                 std::size_t k = kDefaultNeighborhoodSize);

    Vec3 at(const Vec2& q) const;

    /// Distance in the parametric plane from q to the closest image.
    double nearest_image_distance(const Vec2& q) const;
    std::uint32_t nearest_point(const Vec2& q) const;
    std::vector<KdTree<2>::Hit> image_knn(const Vec2& q, std::size_t k) const;

    bool inside(const Vec2& q, double tol = 0.0) const;
    double domain_scale() const { return scale_; }

    const PointCloud& cloud() const { return *cloud_; }
    const Parameterization& param() const { return *param_; }
    std::size_t k() const { return k_; }

private:
    const PointCloud* cloud_;
    const Parameterization* param_;
    std::size_t k_;
    double scale_; // characteristic domain extent, for tolerance bands
    KdTree<2> kd_;
};

/// Local chart around a parametric point: maps stencil offsets (s, t) to
/// domain coordinates. s is the side/radial axis, t the forward axis.
struct Chart {
    enum class Kind { Cartesian, Polar, Rotated };
    Kind kind = Kind::Cartesian;
    Vec2 origin = Vec2::Zero(); // Cartesian / Rotated
    double rho = 0.0, theta = 0.0; // Polar
    double phi = 0.0;              // Rotated axis angle

    static Chart cartesian(const Vec2& q) { return {Kind::Cartesian, q, 0, 0, 0}; }
    static Chart polar(double rho, double theta) {
        return {Kind::Polar, Vec2::Zero(), rho, theta, 0};
    }
    static Chart rotated(const Vec2& q, double phi) {
        return {Kind::Rotated, q, 0, 0, phi};
    }

    Vec2 to_domain(double s, double t) const;
    Vec2 center() const { return to_domain(0.0, 0.0); }
};

/// First/second-order data at a parametric point. u is the chart's s axis
/// (side direction), v its t axis (forward direction).
struct DerivativeSample {
    Vec3 p0 = Vec3::Zero();
    Vec3 r_u = Vec3::Zero(), r_v = Vec3::Zero();
    Vec3 r_uu = Vec3::Zero(), r_vv = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    double e = 0, g = 0;   // first fundamental form
    double l = 0, n = 0;   // second fundamental form (L, N); quadric fit
    double sigma = 0;      // (|r_u| + |r_v|) / 2
    double theta = 0;      // angle(r_u, r_v), in (0, pi)
};

/// First derivatives by central differences on a 4-point stencil mapped
/// through the interpolator (spacing tied to the local image density,
/// shrinking down to 0.25x near the domain edge); second-form coefficients
/// L, N by a quadric fit of the cloud around the nearest point, which is
/// robust to the piecewise nature of the interpolant.
DerivativeSample derivatives(const Interpolator& interp, const Chart& chart);

/// Derivative sample at a path preimage ((u,v) for rectangles, (rho,theta)
/// for disks). The evaluation point is nudged inward when the stencil
/// would cross the domain edge; emitted path points are never moved.
DerivativeSample sample_at_preimage(const Interpolator& interp,
                                    const Vec2& preimage);

enum class CurvatureDirection { U, V };
enum class Convexity { Convex, Concave };

struct CurvatureRadius {
    bool flat = false;     // |II| below threshold: infinite radius
    double radius = 0.0;   // mm, valid when !flat
    Convexity convexity = Convexity::Convex;
};

/// Sign convention: with `convex_when_negative` (the default), a negative
/// second-form coefficient against the oriented normal means the surface
/// bends away from the tool side.
struct SignConvention {
    bool convex_when_negative = true;
};

constexpr double kFlatThreshold = 1e-8; // |II| < thr * |I| => flat

CurvatureRadius curvature_radius(const DerivativeSample& sample,
                                 CurvatureDirection dir,
                                 const SignConvention& sign = {});

/// Mean curvature at cloud point i from a local least-squares quadric fit
/// over the tangent plane, signed by the oriented normal.
double mean_curvature(const PointCloud& cloud, std::uint32_t i,
                      std::size_t k = kDefaultNeighborhoodSize);

} // namespace isopath
