#include "isopath/diffgeo.hpp"

#include "isopath/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace isopath {

Interpolator::Interpolator(const PointCloud& cloud, const Parameterization& param,
                           std::size_t k)
    : cloud_(&cloud), param_(&param), k_(k) {
    if (param.uv.size() != cloud.size())
        throw Error(ErrorCode::InvalidInput,
                    "Interpolator: parameterization size mismatch");
    if (k_ < 3)
        throw Error(ErrorCode::InvalidArgument, "Interpolator: k must be >= 3");
    kd_ = KdTree<2>(param.uv);
    scale_ = param.domain.kind == Domain::Kind::Rect
                 ? std::max(param.domain.a, param.domain.b)
                 : 2.0 * param.domain.r0;
}

bool Interpolator::inside(const Vec2& q, double tol) const {
    const Domain& d = param_->domain;
    if (d.kind == Domain::Kind::Rect)
        return q.x() >= -tol && q.x() <= d.a + tol && q.y() >= -tol &&
               q.y() <= d.b + tol;
    return q.norm() <= d.r0 + tol;
}

double Interpolator::nearest_image_distance(const Vec2& q) const {
    return kd_.knn(q, 1)[0].dist;
}

std::uint32_t Interpolator::nearest_point(const Vec2& q) const {
    return kd_.knn(q, 1)[0].index;
}

std::vector<KdTree<2>::Hit> Interpolator::image_knn(const Vec2& q,
                                                    std::size_t k) const {
    return kd_.knn(q, std::min(k, kd_.size()));
}

Vec3 Interpolator::at(const Vec2& q) const {
    if (!inside(q, 1e-7 * scale_))
        throw Error(ErrorCode::OutOfDomain,
                    "interpolate: point (" + std::to_string(q.x()) + ", " +
                        std::to_string(q.y()) + ") is outside the parametric domain");
    const std::size_t k = std::min(k_, cloud_->size());
    const auto hits = kd_.knn(q, k);
    if (hits[0].dist < 1e-9) return cloud_->point(hits[0].index);

    Eigen::Matrix<double, 2, Eigen::Dynamic> diffs(2, hits.size());
    for (std::size_t j = 0; j < hits.size(); ++j)
        diffs.col(j) = q - param_->uv[hits[j].index];
    const Eigen::VectorXd w = optimal_weight_row<2>(diffs);

    // Affine reproduction failing in the plane means the 2D neighborhood
    // cannot represent q (collinear images).
    Vec2 back = Vec2::Zero();
    Vec3 p = Vec3::Zero();
    for (std::size_t j = 0; j < hits.size(); ++j) {
        back += w(j) * param_->uv[hits[j].index];
        p += w(j) * cloud_->point(hits[j].index);
    }
    if ((back - q).norm() > 1e-6 * std::max(scale_, 1.0))
        throw Error(ErrorCode::DegenerateGeometry,
                    "interpolate: degenerate 2D neighborhood around (" +
                        std::to_string(q.x()) + ", " + std::to_string(q.y()) + ")");
    return p;
}

Vec2 Chart::to_domain(double s, double t) const {
    switch (kind) {
    case Kind::Cartesian:
        return origin + Vec2(s, t);
    case Kind::Polar: {
        const double r = rho + s, a = theta + t;
        return {r * std::cos(a), r * std::sin(a)};
    }
    case Kind::Rotated: {
        const Vec2 eu(std::cos(phi), std::sin(phi));
        const Vec2 ev(-std::sin(phi), std::cos(phi));
        return origin + s * eu + t * ev;
    }
    }
    return origin;
}

namespace {

// Robust stencil spacing at q: the distance to the 4th nearest parameter
// image (skipping a coincident one), so the stencil spans a full local
// sample spacing even right next to the boundary polyline, where the
// single nearest image can be arbitrarily close.
double image_spacing(const Interpolator& interp, const Vec2& q) {
    const auto hits = interp.image_knn(q, 4);
    double d = 1e-12;
    for (const auto& h : hits) d = std::max(d, h.dist);
    return d;
}

bool stencil_inside(const Interpolator& interp, const Chart& chart, double ds,
                    double dt) {
    return interp.inside(chart.to_domain(-ds, 0)) &&
           interp.inside(chart.to_domain(ds, 0)) &&
           interp.inside(chart.to_domain(0, -dt)) &&
           interp.inside(chart.to_domain(0, dt));
}

// Least-squares height-field quadric over the tangent plane at a cloud
// point: z(x, y) = a x^2 + b xy + c y^2 + d x + e y, the center pinning the
// constant term at 0.
struct QuadricFit {
    Vec3 e1, e2, nrm;
    double fxx, fxy, fyy, fx, fy;
};

QuadricFit fit_quadric(const PointCloud& cloud, std::uint32_t i, std::size_t k) {
    if (!cloud.has_normals())
        throw Error(ErrorCode::InvalidInput,
                    "quadric fit: cloud normals are required");
    QuadricFit f;
    f.nrm = cloud.normal(i);
    int least = 0;
    f.nrm.cwiseAbs().minCoeff(&least);
    f.e1 = Vec3::Unit(least).cross(f.nrm).normalized();
    f.e2 = f.nrm.cross(f.e1);

    const Neighborhood nb = knn_of_point(cloud, i, k);
    const std::size_t m = nb.members.size();
    if (m < 5)
        throw Error(ErrorCode::DegenerateGeometry,
                    "quadric fit: not enough neighbors at point " +
                        std::to_string(i));
    Eigen::MatrixXd A(m, 5);
    Eigen::VectorXd z(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Vec3 dvec = cloud.point(nb.members[j]) - cloud.point(i);
        const double x = dvec.dot(f.e1), y = dvec.dot(f.e2);
        A.row(j) << x * x, x * y, y * y, x, y;
        z(j) = dvec.dot(f.nrm);
    }
    const auto cod = A.completeOrthogonalDecomposition();
    if (cod.rank() < 5)
        throw Error(ErrorCode::DegenerateGeometry,
                    "quadric fit: rank deficient at point " + std::to_string(i));
    const Eigen::VectorXd c = cod.solve(z);
    f.fxx = 2.0 * c(0);
    f.fxy = c(1);
    f.fyy = 2.0 * c(2);
    f.fx = c(3);
    f.fy = c(4);
    return f;
}

// Signed normal curvature II(t)/I(t) of the fitted surface in the tangent
// direction dir (3D), against the oriented normal.
double normal_curvature_of(const QuadricFit& f, const Vec3& dir) {
    const double tx = dir.dot(f.e1), ty = dir.dot(f.e2);
    const double w = std::sqrt(1.0 + f.fx * f.fx + f.fy * f.fy);
    const double two =
        (f.fxx * tx * tx + 2.0 * f.fxy * tx * ty + f.fyy * ty * ty) / w;
    const double one = (1.0 + f.fx * f.fx) * tx * tx +
                       2.0 * f.fx * f.fy * tx * ty +
                       (1.0 + f.fy * f.fy) * ty * ty;
    if (!(one > 0.0))
        throw Error(ErrorCode::DegenerateGeometry,
                    "normal curvature: direction is normal to the surface");
    return two / one;
}

} // namespace

DerivativeSample derivatives(const Interpolator& interp, const Chart& chart) {
    if (!interp.cloud().has_normals())
        throw Error(ErrorCode::InvalidInput,
                    "derivatives: cloud normals are required");
    const Vec2 q0 = chart.center();
    if (!interp.inside(q0, 1e-7 * interp.domain_scale()))
        throw Error(ErrorCode::OutOfDomain, "derivatives: center outside domain");

    const double d = image_spacing(interp, q0);
    double ds = d;
    double dt = chart.kind == Chart::Kind::Polar ? d / std::max(chart.rho, d) : d;

    // Shrink to keep the stencil in-domain, down to a quarter of the
    // default spacing.
    const double min_frac = 0.25;
    double frac = 1.0;
    while (!stencil_inside(interp, chart, ds * frac, dt * frac)) {
        frac *= 0.5;
        if (frac < min_frac - 1e-12)
            throw Error(ErrorCode::OutOfDomain,
                        "derivatives: stencil cannot fit inside the domain at (" +
                            std::to_string(q0.x()) + ", " + std::to_string(q0.y()) +
                            ")");
    }
    ds *= frac;
    dt *= frac;

    DerivativeSample s;
    s.p0 = interp.at(q0);
    const Vec3 pu1 = interp.at(chart.to_domain(-ds, 0));
    const Vec3 pu2 = interp.at(chart.to_domain(ds, 0));
    const Vec3 pv1 = interp.at(chart.to_domain(0, -dt));
    const Vec3 pv2 = interp.at(chart.to_domain(0, dt));
    s.r_u = (pu2 - pu1) / (2.0 * ds);
    s.r_uu = (pu1 + pu2 - 2.0 * s.p0) / (ds * ds);
    s.r_v = (pv2 - pv1) / (2.0 * dt);
    s.r_vv = (pv1 + pv2 - 2.0 * s.p0) / (dt * dt);
    const std::uint32_t nearest = interp.nearest_point(q0);
    s.normal = interp.cloud().normal(nearest);
    s.e = s.r_u.squaredNorm();
    s.g = s.r_v.squaredNorm();
    // Second-form coefficients come from a quadric fit of the cloud rather
    // than the raw stencil second differences: the interpolant is only
    // piecewise smooth, and differencing its bumps does not converge with
    // sampling density (10-20% curvature-radius error on analytic patches).
    const QuadricFit fit = fit_quadric(interp.cloud(), nearest, interp.k());
    s.l = normal_curvature_of(fit, s.r_u) * s.e;
    s.n = normal_curvature_of(fit, s.r_v) * s.g;
    const double nu = s.r_u.norm(), nv = s.r_v.norm();
    if (!(nu > 0.0) || !(nv > 0.0))
        throw Error(ErrorCode::DegenerateGeometry,
                    "derivatives: vanishing tangent vector");
    s.sigma = 0.5 * (nu + nv);
    s.theta = std::atan2(s.r_u.cross(s.r_v).norm(), s.r_u.dot(s.r_v));
    return s;
}

// The evaluation point is kept this many local spacings inside the domain
// so the whole stencil sits in well-interpolated territory; the boundary
// fringe of the parameter plane is covered by one-sided neighborhoods.
static constexpr double kEdgeMarginFactor = 2.0;

DerivativeSample sample_at_preimage(const Interpolator& interp,
                                    const Vec2& preimage) {
    const Domain& dom = interp.param().domain;
    if (dom.kind == Domain::Kind::Rect) {
        const double u = preimage.x(), v = preimage.y();
        const double cap = 0.45 * std::min(dom.a, dom.b);
        double margin = std::min(
            kEdgeMarginFactor * image_spacing(interp, {u, v}), cap);
        for (int attempt = 0;; ++attempt) {
            const double uu = std::clamp(u, margin, dom.a - margin);
            const double vv = std::clamp(v, margin, dom.b - margin);
            try {
                return derivatives(interp, Chart::cartesian({uu, vv}));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::OutOfDomain || attempt >= 4) throw;
                margin *= 2.0;
            }
        }
    }
    const double rho = preimage.x(), theta = preimage.y();
    const Vec2 q(rho * std::cos(theta), rho * std::sin(theta));
    double margin = std::min(kEdgeMarginFactor * image_spacing(interp, q),
                             0.45 * dom.r0);
    for (int attempt = 0;; ++attempt) {
        const double rr = std::clamp(rho, margin, dom.r0 - margin);
        try {
            return derivatives(interp, Chart::polar(rr, theta));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutOfDomain || attempt >= 4) throw;
            margin *= 2.0;
        }
    }
}

CurvatureRadius curvature_radius(const DerivativeSample& sample,
                                 CurvatureDirection dir,
                                 const SignConvention& sign) {
    const double first = dir == CurvatureDirection::V ? sample.g : sample.e;
    const double second = dir == CurvatureDirection::V ? sample.n : sample.l;
    CurvatureRadius out;
    if (std::abs(second) < kFlatThreshold * std::abs(first)) {
        out.flat = true;
        out.radius = std::numeric_limits<double>::infinity();
        return out;
    }
    out.radius = std::abs(first / second);
    const bool negative = second < 0.0;
    out.convexity = (negative == sign.convex_when_negative) ? Convexity::Convex
                                                            : Convexity::Concave;
    return out;
}

double mean_curvature(const PointCloud& cloud, std::uint32_t i, std::size_t k) {
    const QuadricFit f = fit_quadric(cloud, i, k);
    const double denom = std::pow(1.0 + f.fx * f.fx + f.fy * f.fy, 1.5);
    return ((1.0 + f.fy * f.fy) * f.fxx - 2.0 * f.fx * f.fy * f.fxy +
            (1.0 + f.fx * f.fx) * f.fyy) /
           (2.0 * denom);
}

} // namespace isopath
