#pragma once

#include "isopath/planner.hpp"

#include <string>
#include <vector>

namespace isopath {

/// Side-interval error statistics for one adjacent path pair, per the
/// metric eps(%) = |l_s - l'_s| / l_s * 100, with the scallop-height
/// error estimate e_h = 2 eps.
struct PathQualityReport {
    std::vector<double> epsilon; // %, one entry per measured point
    double mean = 0, max = 0, min = 0;
    double scallop_error_mean = 0; // e_h = 2 * mean
    double chord_max = 0;          // mm, filled when a chord audit ran
    double tolerance_pct = 0;      // pass threshold on the mean, 0 = no gate
    bool pass = true;
};

/// Predicted side intervals l'_s = du * sigma at each point of path_a,
/// where du is the parametric gap to path_b.
std::vector<double> predicted_side_intervals(const ToolPath& path_a,
                                             const ToolPath& path_b,
                                             const Interpolator& interp);

/// Achieved side interval at each point of path_a: distance to the
/// closest point of path_b projected onto the plane normal to the
/// forward tangent.
std::vector<double> measured_side_intervals(const ToolPath& path_a,
                                            const ToolPath& path_b);

PathQualityReport side_interval_error(const ToolPath& path_a,
                                      const ToolPath& path_b,
                                      const std::vector<double>& targets,
                                      double tolerance_pct = 0.0);

/// Max distance between the interpolated surface and the chords of a
/// path, sampling samples_per_segment parametric points per segment.
double chord_deviation_audit(const ToolPath& path, const Interpolator& interp,
                             int samples_per_segment);

enum class AnalyticSurface { Plane, Sphere, Cylinder };

struct RegressionCheck {
    std::string name;
    bool pass = false;
    double value = 0;
    double limit = 0;
};

struct RegressionResult {
    bool pass = true;
    std::vector<RegressionCheck> checks;
    std::vector<PathQualityReport> side_reports;
    double chord_max = 0;
};

/// Synthesizes the analytic cloud, runs the full pipeline, and audits the
/// plan against the closed-form expectations of the surface.
RegressionResult analytic_regression(AnalyticSurface surface, double radius,
                                     const ToolConfig& cfg);

} // namespace isopath
