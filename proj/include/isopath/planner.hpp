#pragma once

#include "isopath/diffgeo.hpp"

#include <vector>

namespace isopath {

enum class PathPattern { DirectionParallel, ContourParallel };

struct ToolConfig {
    double cutter_radius = 4.0; // mm, ball-end
    double scallop_limit = 1.0; // mm
    double chord_limit = 0.01;  // mm
    PathPattern pattern = PathPattern::DirectionParallel;
    int boundary_band_paths = 4;    // near-boundary paths per side, 3..5
    double max_step_fraction = 0.05; // cap on any parametric step
    std::size_t knn = kDefaultNeighborhoodSize;
    SignConvention sign;

    void validate() const; // throws invalid-argument on a bad combination
};

struct PathPoint {
    Vec3 position; // cutter-location point, mm
    Vec2 preimage; // (u, v) for rect, (rho, theta) for disk
};

/// Where in the two-stage procedure a path came from. BandLow grows from
/// u=0 (or the disk center side is Fill/Center); BandHigh grows inward
/// from u=a or rho=R0. Exactly one consecutive pair per plan is a seam
/// where the two fronts meet rather than a stepped offset.
enum class PathStage { BandLow, BandHigh, Fill, Center };

struct ToolPath {
    int index = 0;
    PathPattern pattern = PathPattern::DirectionParallel;
    PathStage stage = PathStage::Fill;
    std::vector<PathPoint> points;
};

/// Forward surface interval sqrt(8eR - 4e^2) bounding chord deviation.
/// Flat curvature falls back to `flat_cap` (mm).
double forward_interval(const CurvatureRadius& radius, double chord_limit,
                        double flat_cap);

/// Side surface interval sqrt(8hr R/(R +- r)); + for convex, - for
/// concave. Flat curvature gives the R->inf limit sqrt(8hr).
double side_interval(const CurvatureRadius& radius, double scallop_limit,
                     double cutter_radius);

/// Parametric forward step l_f / |r_v|, capped at
/// max_step_fraction * forward_extent.
double forward_step(const DerivativeSample& sample, const ToolConfig& cfg,
                    double forward_extent);

/// Parametric side step l_s / |r_u| from the u-direction curvature.
double side_step_interior(const DerivativeSample& sample, const ToolConfig& cfg);

/// Near-boundary side step: side curvature from the Euler relation
/// k_s = 2H - k_f, interval projected by 1/cos(|theta - pi/2|).
double side_step_boundary(const DerivativeSample& sample, double mean_curv,
                          const ToolConfig& cfg);

std::vector<ToolPath> plan_direction_parallel(const Interpolator& interp,
                                              const ToolConfig& cfg);
std::vector<ToolPath> plan_contour_parallel(const Interpolator& interp,
                                            const ToolConfig& cfg);

/// Dispatches on the parameterization's domain kind.
std::vector<ToolPath> plan(const Interpolator& interp, const ToolConfig& cfg);

} // namespace isopath
