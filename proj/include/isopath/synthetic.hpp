#pragma once

#include "isopath/cloud.hpp"

#include <cstdint>
#include <vector>

namespace isopath {

/// Test/benchmark cloud with ground-truth boundary tags and break points.
struct SyntheticCloud {
    PointCloud cloud;
    std::vector<std::uint32_t> breaks; // 4 corners (grids) or 2 (disk)
};

/// Planar grid in z = 0, boundary ring exact, interior jittered in-plane
/// by up to jitter * spacing. Breaks are the 4 corners, counterclockwise
/// from the lower left.
SyntheticCloud plane_grid(int nx, int ny, double spacing, double jitter = 0.0,
                          unsigned seed = 1);

/// Concentric-ring sampling of a flat disk; the outermost ring is the
/// boundary, breaks are two opposite boundary points.
SyntheticCloud disk_grid(double radius, double spacing, double jitter = 0.0,
                         unsigned seed = 1);

/// Graph patch z = sqrt(R^2 - x^2 - y^2) over [-half_extent, half_extent]^2.
SyntheticCloud sphere_cap(double sphere_radius, double half_extent,
                          double spacing, double jitter = 0.0,
                          unsigned seed = 1);

/// Cylinder patch of the given radius: axis along y (length `length`),
/// arc spanning [-half_angle, half_angle]. Breaks are ordered so the
/// u direction runs along the axis and v across the curvature.
SyntheticCloud cylinder_patch(double cyl_radius, double half_angle,
                              double length, double spacing,
                              double jitter = 0.0, unsigned seed = 1);

} // namespace isopath
