#pragma once

#include "isopath/planner.hpp"
#include "isopath/verify.hpp"

#include <string>
#include <utility>
#include <vector>

namespace isopath {

struct CloudData {
    std::vector<Vec3> points;
    std::vector<Vec3> normals; // empty when the file carries none
};

/// Whitespace-separated `x y z` (or `x y z nx ny nz`) per line; `#` starts
/// a comment.
CloudData read_xyz(const std::string& path);

/// ASCII or binary little-endian PLY; consumes vertex x/y/z and, when
/// present, nx/ny/nz. Other elements and properties are skipped.
CloudData read_ply(const std::string& path);

/// Dispatches on the file extension (.ply, else xyz).
CloudData read_cloud(const std::string& path);

/// One boundary break index per line; `#` comments allowed.
std::vector<std::uint32_t> read_breaks(const std::string& path);

/// `param.txt`: a `# domain ...` header, then one `i u v` line per point.
/// Values are written with 17 significant digits so a read-back reproduces
/// the in-memory parameterization exactly.
void write_param(const std::string& path, const Parameterization& param);
Parameterization read_param(const std::string& path);

/// `paths.txt`: per path a `PATH <index> <pattern>` header, then one
/// `x y z u v` line per point, fixed 6 decimals.
void write_paths(const std::string& path, const std::vector<ToolPath>& paths);
std::vector<ToolPath> read_paths(const std::string& path);

/// Parameter images as dots (boundary highlighted) plus the domain outline.
void write_domain_svg(const std::string& path, const PointCloud& cloud,
                      const Parameterization& param);

/// All paths drawn in the parametric domain.
void write_paths_svg(const std::string& path, const Domain& domain,
                     const std::vector<ToolPath>& paths);

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv);

/// One row per measured point: `pair,point,epsilon_pct`.
void write_epsilon_csv(const std::string& path,
                       const std::vector<PathQualityReport>& reports);

} // namespace isopath
