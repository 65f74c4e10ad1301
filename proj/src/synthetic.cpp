#include "isopath/synthetic.hpp"

#include "isopath/error.hpp"

#include <cmath>
#include <random>

namespace isopath {

namespace {

double jitter_amount(std::mt19937& rng, double amplitude) {
    return std::uniform_real_distribution<double>(-amplitude, amplitude)(rng);
}

} // namespace

SyntheticCloud plane_grid(int nx, int ny, double spacing, double jitter,
                          unsigned seed) {
    if (nx < 3 || ny < 3 || !(spacing > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "plane_grid: need nx, ny >= 3 and positive spacing");
    std::mt19937 rng(seed);
    const double amp = jitter * spacing;
    std::vector<Vec3> pts;
    std::vector<PointTag> tags;
    pts.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const bool edge = i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
            double x = i * spacing, y = j * spacing;
            if (!edge && amp > 0.0) {
                x += jitter_amount(rng, amp);
                y += jitter_amount(rng, amp);
            }
            pts.push_back({x, y, 0.0});
            tags.push_back(edge ? PointTag::Boundary : PointTag::Interior);
        }
    SyntheticCloud out{PointCloud(std::move(pts)), {}};
    out.cloud.set_tags(std::move(tags));
    out.cloud.set_normals(std::vector<Vec3>(out.cloud.size(), Vec3::UnitZ()));
    const auto at = [&](int i, int j) {
        return static_cast<std::uint32_t>(j * nx + i);
    };
    out.breaks = {at(0, 0), at(nx - 1, 0), at(nx - 1, ny - 1), at(0, ny - 1)};
    return out;
}

SyntheticCloud disk_grid(double radius, double spacing, double jitter,
                         unsigned seed) {
    if (!(radius > 2.0 * spacing) || !(spacing > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "disk_grid: need positive spacing well below the radius");
    std::mt19937 rng(seed);
    const double amp = jitter * spacing;
    const int rings = std::max(2, static_cast<int>(std::llround(radius / spacing)));
    std::vector<Vec3> pts{{0.0, 0.0, 0.0}};
    std::vector<PointTag> tags{PointTag::Interior};
    std::uint32_t outer_start = 0;
    std::size_t outer_count = 0;
    for (int m = 1; m <= rings; ++m) {
        const double r = radius * m / rings;
        const bool edge = m == rings;
        const auto count = std::max<std::size_t>(
            6, static_cast<std::size_t>(std::llround(2.0 * M_PI * r / spacing)));
        if (edge) {
            outer_start = static_cast<std::uint32_t>(pts.size());
            outer_count = count;
        }
        for (std::size_t t = 0; t < count; ++t) {
            const double theta = 2.0 * M_PI * t / count;
            double x = r * std::cos(theta), y = r * std::sin(theta);
            if (!edge && amp > 0.0) {
                x += jitter_amount(rng, amp);
                y += jitter_amount(rng, amp);
            }
            pts.push_back({x, y, 0.0});
            tags.push_back(edge ? PointTag::Boundary : PointTag::Interior);
        }
    }
    SyntheticCloud out{PointCloud(std::move(pts)), {}};
    out.cloud.set_tags(std::move(tags));
    out.cloud.set_normals(std::vector<Vec3>(out.cloud.size(), Vec3::UnitZ()));
    out.breaks = {outer_start,
                  outer_start + static_cast<std::uint32_t>(outer_count / 2)};
    return out;
}

SyntheticCloud sphere_cap(double sphere_radius, double half_extent,
                          double spacing, double jitter, unsigned seed) {
    if (!(sphere_radius > 0.0) || !(half_extent > 0.0) || !(spacing > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "sphere_cap: radius, extent and spacing must be positive");
    if (!(half_extent * std::sqrt(2.0) < sphere_radius))
        throw Error(ErrorCode::InvalidArgument,
                    "sphere_cap: patch corners leave the upper hemisphere");
    std::mt19937 rng(seed);
    const double amp = jitter * spacing;
    const int n =
        std::max(3, static_cast<int>(std::llround(2.0 * half_extent / spacing)) + 1);
    std::vector<Vec3> pts;
    std::vector<Vec3> normals;
    std::vector<PointTag> tags;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const bool edge = i == 0 || i == n - 1 || j == 0 || j == n - 1;
            double x = -half_extent + 2.0 * half_extent * i / (n - 1);
            double y = -half_extent + 2.0 * half_extent * j / (n - 1);
            if (!edge && amp > 0.0) {
                x += jitter_amount(rng, amp);
                y += jitter_amount(rng, amp);
            }
            const double z =
                std::sqrt(sphere_radius * sphere_radius - x * x - y * y);
            pts.push_back({x, y, z});
            normals.push_back(Vec3(x, y, z) / sphere_radius);
            tags.push_back(edge ? PointTag::Boundary : PointTag::Interior);
        }
    SyntheticCloud out{PointCloud(std::move(pts)), {}};
    out.cloud.set_tags(std::move(tags));
    out.cloud.set_normals(std::move(normals));
    const auto at = [&](int i, int j) {
        return static_cast<std::uint32_t>(j * n + i);
    };
    out.breaks = {at(0, 0), at(n - 1, 0), at(n - 1, n - 1), at(0, n - 1)};
    return out;
}

SyntheticCloud cylinder_patch(double cyl_radius, double half_angle,
                              double length, double spacing, double jitter,
                              unsigned seed) {
    if (!(cyl_radius > 0.0) || !(length > 0.0) || !(spacing > 0.0))
        throw Error(ErrorCode::InvalidArgument,
                    "cylinder_patch: radius, length and spacing must be positive");
    if (!(half_angle > 0.0 && half_angle < M_PI / 2.0))
        throw Error(ErrorCode::InvalidArgument,
                    "cylinder_patch: half angle must be in (0, pi/2)");
    std::mt19937 rng(seed);
    const int na = std::max(
        3, static_cast<int>(std::llround(2.0 * half_angle * cyl_radius / spacing)) +
               1);
    const int ny =
        std::max(3, static_cast<int>(std::llround(length / spacing)) + 1);
    const double amp = jitter * spacing;
    std::vector<Vec3> pts;
    std::vector<Vec3> normals;
    std::vector<PointTag> tags;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < na; ++i) {
            const bool edge = i == 0 || i == na - 1 || j == 0 || j == ny - 1;
            double phi = -half_angle + 2.0 * half_angle * i / (na - 1);
            double y = length * j / (ny - 1);
            if (!edge && amp > 0.0) {
                // Jitter in surface coordinates so points stay on the cylinder.
                phi += jitter_amount(rng, amp) / cyl_radius;
                y += jitter_amount(rng, amp);
            }
            pts.push_back({cyl_radius * std::sin(phi), y,
                           cyl_radius * std::cos(phi)});
            normals.push_back({std::sin(phi), 0.0, std::cos(phi)});
            tags.push_back(edge ? PointTag::Boundary : PointTag::Interior);
        }
    SyntheticCloud out{PointCloud(std::move(pts)), {}};
    out.cloud.set_tags(std::move(tags));
    out.cloud.set_normals(std::move(normals));
    const auto at = [&](int i, int j) {
        return static_cast<std::uint32_t>(j * na + i);
    };
    // Breaks ordered so part 1 runs along the axis: the u direction is then
    // straight and the forward (v) direction crosses the curvature.
    out.breaks = {at(0, 0), at(0, ny - 1), at(na - 1, ny - 1), at(na - 1, 0)};
    return out;
}

} // namespace isopath
