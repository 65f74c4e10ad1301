#include "isopath/error.hpp"
#include "isopath/io.hpp"
#include "isopath/parallel.hpp"
#include "isopath/param.hpp"
#include "isopath/planner.hpp"
#include "isopath/synthetic.hpp"
#include "isopath/verify.hpp"
#include "isopath/weights.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace isopath;

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidInput:
    case ErrorCode::OutOfDomain:
        return 2;
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::Topology:
        return 3;
    case ErrorCode::SolverFailure:
        return 4;
    default: // Gouging, TooSparse, InvalidCurvature
        return 5;
    }
}

struct Shared {
    std::string in;
    std::string breaks;
    std::string domain = "rect";
    std::string out = ".";
    std::size_t knn = kDefaultNeighborhoodSize;
};

struct PlanFlags {
    std::string pattern = "direction";
    double cutter = 4.0;
    double scallop = 1.0;
    double chord = 0.01;
    int band_paths = 4;
};

void add_shared(CLI::App* cmd, Shared& s, bool need_breaks) {
    cmd->add_option("--in", s.in, "input cloud (.xyz or .ply)")->required();
    auto* b = cmd->add_option("--breaks", s.breaks,
                              "boundary break indices, one per line");
    if (need_breaks) b->required();
    cmd->add_option("--domain", s.domain, "parametric domain")
        ->check(CLI::IsMember({"rect", "disk"}));
    cmd->add_option("--knn", s.knn, "neighborhood size (default 12)");
    cmd->add_option("--out", s.out, "output directory (default .)");
}

void add_plan_flags(CLI::App* cmd, PlanFlags& p) {
    cmd->add_option("--pattern", p.pattern, "path pattern")
        ->check(CLI::IsMember({"direction", "contour"}));
    cmd->add_option("--cutter", p.cutter, "ball-end cutter radius r, mm");
    cmd->add_option("--scallop", p.scallop, "scallop height limit h, mm");
    cmd->add_option("--chord", p.chord, "chord deviation limit e, mm");
    cmd->add_option("--band-paths", p.band_paths,
                    "near-boundary paths per side (3..5)");
}

ToolConfig make_config(const Shared& s, const PlanFlags& p) {
    ToolConfig cfg;
    cfg.cutter_radius = p.cutter;
    cfg.scallop_limit = p.scallop;
    cfg.chord_limit = p.chord;
    cfg.boundary_band_paths = p.band_paths;
    cfg.knn = s.knn;
    cfg.pattern = p.pattern == "contour" ? PathPattern::ContourParallel
                                         : PathPattern::DirectionParallel;
    cfg.validate();
    return cfg;
}

PointCloud load_cloud(const Shared& s) {
    CloudData data = read_cloud(s.in);
    PointCloud cloud(std::move(data.points));
    if (!data.normals.empty()) {
        for (Vec3& n : data.normals) {
            const double len = n.norm();
            if (!(len > 0.0))
                throw Error(ErrorCode::InvalidInput,
                            s.in + ": zero-length normal");
            n /= len;
        }
        cloud.set_normals(std::move(data.normals));
    } else {
        compute_normals(cloud, s.knn);
    }
    return cloud;
}

Parameterization compute_param(PointCloud& cloud, const Shared& s) {
    classify_boundary(cloud, s.knn, kDefaultGapThreshold);
    const std::vector<std::uint32_t> breaks = read_breaks(s.breaks);
    const BoundaryLoop loop = order_boundary(cloud, breaks);
    const BoundaryMap bm = s.domain == "disk" ? map_boundary_disk(cloud, loop)
                                              : map_boundary_rect(cloud, loop);
    const WeightSet weights = build_laplacian(cloud, s.knn);
    return solve_parameterization(cloud, weights, bm);
}

std::string pct(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void ensure_out(const Shared& s) {
    std::filesystem::create_directories(s.out);
}

std::string join(const Shared& s, const char* name) {
    return (std::filesystem::path(s.out) / name).string();
}

void check_consistency(const PointCloud& cloud, const Parameterization& param,
                       const std::vector<ToolPath>& paths) {
    if (param.uv.size() != cloud.size())
        throw Error(ErrorCode::InvalidInput,
                    "parameterization has " + std::to_string(param.uv.size()) +
                        " rows but the cloud has " + std::to_string(cloud.size()) +
                        " points");
    const Domain& d = param.domain;
    const double tol = 1e-3 * (d.kind == Domain::Kind::Rect
                                   ? std::max(d.a, d.b)
                                   : d.r0);
    for (const ToolPath& tp : paths)
        for (const PathPoint& pt : tp.points) {
            const Vec2& pre = pt.preimage;
            const bool ok =
                d.kind == Domain::Kind::Rect
                    ? pre.x() >= -tol && pre.x() <= d.a + tol &&
                          pre.y() >= -tol && pre.y() <= d.b + tol
                    : pre.x() >= -tol && pre.x() <= d.r0 + tol;
            if (!ok)
                throw Error(ErrorCode::InvalidInput,
                            "path " + std::to_string(tp.index) +
                                " lies outside the parametric domain; paths and "
                                "parameterization do not match");
        }
    for (std::size_t i = 0; i < paths.size(); ++i)
        if (paths[i].index != static_cast<int>(i))
            throw Error(ErrorCode::InvalidInput,
                        "path indices are not consecutive from 0");
}

std::vector<PathQualityReport>
pair_reports(const std::vector<ToolPath>& paths, const Interpolator& interp) {
    std::vector<PathQualityReport> reports;
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
        const auto targets =
            predicted_side_intervals(paths[i], paths[i + 1], interp);
        reports.push_back(side_interval_error(paths[i], paths[i + 1], targets));
    }
    return reports;
}

std::vector<std::pair<std::string, std::string>>
summarize(const std::vector<ToolPath>& paths,
          const std::vector<PathQualityReport>& reports) {
    std::size_t points = 0;
    for (const ToolPath& p : paths) points += p.points.size();
    double sum = 0, worst = 0;
    std::size_t n = 0;
    for (const auto& r : reports) {
        for (double e : r.epsilon) sum += e;
        n += r.epsilon.size();
        worst = std::max(worst, r.max);
    }
    const double mean = n ? sum / n : 0.0;
    return {
        {"paths", std::to_string(paths.size())},
        {"points", std::to_string(points)},
        {"epsilon_mean_pct", pct(mean)},
        {"epsilon_max_pct", pct(worst)},
        {"scallop_error_mean_pct", pct(2.0 * mean)},
    };
}

int cmd_param(const Shared& s) {
    PointCloud cloud = load_cloud(s);
    const Parameterization param = compute_param(cloud, s);
    ensure_out(s);
    write_param(join(s, "param.txt"), param);
    write_domain_svg(join(s, "domain.svg"), cloud, param);
    const ConformalityReport rep = conformality_report(cloud, param, 500, s.knn);
    std::cout << "points: " << cloud.size() << "\n"
              << "boundary: " << cloud.boundary_count() << "\n"
              << "median_eg_distortion: " << pct(rep.median_eg()) << "\n"
              << "median_theta_dev_deg: "
              << pct(rep.median_theta_dev() * 180.0 / M_PI) << "\n";
    return 0;
}

int cmd_plan(const Shared& s, const PlanFlags& pf) {
    const ToolConfig cfg = make_config(s, pf);
    PointCloud cloud = load_cloud(s);
    Parameterization param;
    const std::string param_path = join(s, "param.txt");
    if (std::filesystem::exists(param_path)) {
        param = read_param(param_path);
        if (param.uv.size() != cloud.size())
            throw Error(ErrorCode::InvalidInput,
                        param_path + ": row count does not match the cloud");
    } else {
        param = compute_param(cloud, s);
        ensure_out(s);
        write_param(param_path, param);
    }
    const Interpolator interp(cloud, param, cfg.knn);
    const std::vector<ToolPath> paths = plan(interp, cfg);
    ensure_out(s);
    write_paths(join(s, "paths.txt"), paths);
    write_paths_svg(join(s, "paths.svg"), param.domain, paths);
    const auto reports = pair_reports(paths, interp);
    write_report(join(s, "report.txt"), summarize(paths, reports));
    std::cout << "paths: " << paths.size() << "\n";
    return 0;
}

int cmd_verify(const Shared& s, const PlanFlags& pf,
               const std::string& analytic) {
    if (!analytic.empty()) {
        const auto colon = analytic.find(':');
        const std::string shape = analytic.substr(0, colon);
        double radius = 0.0;
        if (colon != std::string::npos)
            radius = std::stod(analytic.substr(colon + 1));
        AnalyticSurface surf;
        if (shape == "plane")
            surf = AnalyticSurface::Plane;
        else if (shape == "sphere")
            surf = AnalyticSurface::Sphere;
        else if (shape == "cylinder")
            surf = AnalyticSurface::Cylinder;
        else
            throw Error(ErrorCode::InvalidArgument,
                        "--analytic: unknown shape '" + shape + "'");
        ToolConfig cfg;
        cfg.cutter_radius = pf.cutter;
        cfg.scallop_limit = pf.scallop;
        cfg.chord_limit = pf.chord;
        cfg.boundary_band_paths = pf.band_paths;
        cfg.knn = s.knn;
        cfg.pattern = pf.pattern == "contour" ? PathPattern::ContourParallel
                                              : PathPattern::DirectionParallel;
        const RegressionResult res = analytic_regression(surf, radius, cfg);
        std::vector<std::pair<std::string, std::string>> kv;
        for (const RegressionCheck& c : res.checks) {
            std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " = "
                      << pct(c.value) << " (limit " << pct(c.limit) << ")\n";
            kv.push_back({c.name, pct(c.value) + (c.pass ? " pass" : " fail")});
        }
        ensure_out(s);
        write_report(join(s, "report.txt"), kv);
        write_epsilon_csv(join(s, "epsilon.csv"), res.side_reports);
        return res.pass ? 0 : 1;
    }

    PointCloud cloud = load_cloud(s);
    const Parameterization param = read_param(join(s, "param.txt"));
    const std::vector<ToolPath> paths = read_paths(join(s, "paths.txt"));
    check_consistency(cloud, param, paths);
    const Interpolator interp(cloud, param, s.knn);
    const auto reports = pair_reports(paths, interp);
    write_report(join(s, "report.txt"), summarize(paths, reports));
    write_epsilon_csv(join(s, "epsilon.csv"), reports);
    for (const auto& [k, v] : summarize(paths, reports))
        std::cout << k << ": " << v << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    isopath::apply_thread_limit_from_env();
    CLI::App app{"iso-parametric tool paths on point clouds"};
    app.require_subcommand(1);

    Shared sp, sl, sv;
    PlanFlags pl, pv;
    std::string analytic;

    CLI::App* cparam = app.add_subcommand("param", "compute a parameterization");
    add_shared(cparam, sp, true);

    CLI::App* cplan = app.add_subcommand("plan", "plan tool paths");
    add_shared(cplan, sl, true);
    add_plan_flags(cplan, pl);

    CLI::App* cverify = app.add_subcommand("verify", "audit planned paths");
    cverify->add_option("--analytic", analytic,
                        "run the analytic oracle suite, e.g. sphere:50");
    cverify->add_option("--in", sv.in, "input cloud (.xyz or .ply)");
    cverify->add_option("--out", sv.out, "job directory (default .)");
    cverify->add_option("--knn", sv.knn, "neighborhood size (default 12)");
    add_plan_flags(cverify, pv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cparam->parsed()) return cmd_param(sp);
        if (cplan->parsed()) return cmd_plan(sl, pl);
        if (analytic.empty() && sv.in.empty())
            throw isopath::Error(isopath::ErrorCode::InvalidArgument,
                                 "verify: --in is required without --analytic");
        return cmd_verify(sv, pv, analytic);
    } catch (const isopath::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
