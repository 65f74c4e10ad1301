#pragma once

#include "isopath/cloud.hpp"
#include "isopath/linsolve.hpp"
#include "isopath/weights.hpp"

#include <cstdint>
#include <vector>

namespace isopath {

struct Domain {
    enum class Kind { Rect, Disk };
    Kind kind = Kind::Rect;
    double a = 0.0, b = 0.0; // rectangle extents, mm-scale parameter units
    double r0 = 0.0;         // disk radius
};

/// Ordered boundary with break points. `order` starts at the first break
/// and runs once around the loop; `cum[j]` is the chord length from
/// order[0] to order[j] (cum[0] = 0); `total` adds the closing chord.
struct BoundaryLoop {
    std::vector<std::uint32_t> order;
    std::vector<std::size_t> break_pos; // positions of breaks within `order`
    std::vector<double> cum;
    std::vector<double> part_length; // L_1..L_k, closing chords included
    double total = 0.0;

    std::size_t parts() const { return break_pos.size(); }
};

/// Planar boundary images, one per boundary point.
struct BoundaryMap {
    Domain domain;
    std::vector<std::uint32_t> indices;
    std::vector<Vec2> uv; // Cartesian; disk images lie on the circle r0
};

/// Per-point planar coordinates. Disk domains are stored in Cartesian
/// form centered at the origin; polar() converts on demand.
struct Parameterization {
    Domain domain;
    std::vector<Vec2> uv;

    Vec2 polar(std::size_t i) const; // (rho, theta), theta in [0, 2pi)
};

/// Orders all boundary points of a classified cloud into a loop broken at
/// the given break points. Each part is ordered by solving the 1D Laplace
/// system with inverse-distance weights, the part's end breaks fixed at 0
/// and 1.
BoundaryLoop order_boundary(const PointCloud& cloud,
                            const std::vector<std::uint32_t>& breaks,
                            std::size_t boundary_knn = 4);

/// Chord-length proportional assignment onto the circle of radius
/// R0 = L / (2 pi).
BoundaryMap map_boundary_disk(const PointCloud& cloud, const BoundaryLoop& loop);

/// Chord-length proportional assignment onto the rectangle
/// [0, (L1+L3)/2] x [0, (L2+L4)/2]; requires exactly 4 parts, breaks land
/// on the corners, traversal is counterclockwise from the lower left.
BoundaryMap map_boundary_rect(const PointCloud& cloud, const BoundaryLoop& loop);

/// Solves the interior Laplace system A U = -B U_b (one solve per
/// coordinate) and assembles the full parameterization.
Parameterization solve_parameterization(const PointCloud& cloud,
                                        const WeightSet& weights,
                                        const BoundaryMap& boundary,
                                        const SolveOptions& solve = {});

struct ConformalityReport {
    std::vector<std::uint32_t> sample_indices;
    std::vector<double> eg_distortion; // |E - G| / max(E, G)
    std::vector<double> f_over_e;      // |F| / E
    std::vector<double> theta;         // angle(r_u, r_v), radians

    double median_eg() const;
    double median_theta_dev() const; // median |theta - pi/2|
    double mean_eg() const;
};

/// Distortion statistics at up to `samples` interior points (deterministic
/// stride sampling; full enumeration when samples covers the interior).
ConformalityReport conformality_report(const PointCloud& cloud,
                                       const Parameterization& param,
                                       std::size_t samples,
                                       std::size_t k = kDefaultNeighborhoodSize,
                                       Execution exec = Execution::Parallel);

} // namespace isopath
