// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Settings follow the library defaults (r=4, h=1, e=0.01,
// K=12) unless a criterion says otherwise.

#include "isopath/diffgeo.hpp"
#include "isopath/io.hpp"
#include "isopath/param.hpp"
#include "isopath/planner.hpp"
#include "isopath/synthetic.hpp"
#include "isopath/verify.hpp"
#include "isopath/weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace isopath;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n == 0 ? 0.0 : (n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]));
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Pipeline {
    SyntheticCloud syn;
    Parameterization param;

    explicit Pipeline(SyntheticCloud s) : syn(std::move(s)) {
        const WeightSet ws = build_laplacian(syn.cloud);
        const BoundaryLoop loop = order_boundary(syn.cloud, syn.breaks);
        const BoundaryMap bm = map_boundary_rect(syn.cloud, loop);
        param = solve_parameterization(syn.cloud, ws, bm);
    }
};

const RegressionCheck* find_check(const RegressionResult& res,
                                  const std::string& name) {
    for (const auto& c : res.checks)
        if (c.name == name) return &c;
    return nullptr;
}

// 1. Linear precision of the weights and of the harmonic extension under a
//    similarity boundary map, on a ~1600-point jittered planar grid, < 5 s.
Outcome criterion1() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    SyntheticCloud syn = plane_grid(41, 41, 1.0, 0.25, 11);
    const WeightSet ws = build_laplacian(syn.cloud);
    double worst_fit = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws.has_row(i)) worst_fit = std::max(worst_fit, ws.fit_residual[i]);
    out.expect(worst_fit <= 1e-9,
               "weight reproduction residual " + num(worst_fit) + " > 1e-9 mm");

    // Boundary images from a fixed similarity of the plane: the interior
    // solve must reproduce the same similarity.
    const double scale = 0.5;
    const Vec2 shift(3.0, 7.0);
    BoundaryMap bm;
    bm.domain.kind = Domain::Kind::Rect;
    bm.domain.a = 40.0 * scale + shift.x();
    bm.domain.b = 40.0 * scale + shift.y();
    for (std::uint32_t i = 0; i < syn.cloud.size(); ++i) {
        if (syn.cloud.tag(i) != PointTag::Boundary) continue;
        bm.indices.push_back(i);
        bm.uv.push_back(scale * Vec2(syn.cloud.point(i).x(),
                                     syn.cloud.point(i).y()) +
                        shift);
    }
    const Parameterization param = solve_parameterization(syn.cloud, ws, bm);
    double worst_uv = 0.0;
    for (std::size_t i = 0; i < param.uv.size(); ++i) {
        const Vec2 expected =
            scale * Vec2(syn.cloud.point(i).x(), syn.cloud.point(i).y()) + shift;
        worst_uv = std::max(worst_uv, (param.uv[i] - expected).norm());
    }
    out.expect(worst_uv <= 1e-6,
               "similarity deviation " + num(worst_uv) + " > 1e-6");
    const double dt = seconds_since(t0);
    out.expect(dt < 5.0, "runtime " + num(dt) + " s >= 5 s");
    if (out.pass)
        out.detail = "fit " + num(worst_fit) + " mm, similarity " +
                     num(worst_uv) + ", " + num(dt) + " s";
    return out;
}

// 2. Conformality on a ~2000-point sphere cap (R = 50), rectangle domain,
//    two boundary rings excluded from the statistics.
Outcome criterion2() {
    Outcome out;
    Pipeline pipe{sphere_cap(50.0, 22.0, 1.0)};
    const std::size_t n =
        static_cast<std::size_t>(std::llround(std::sqrt(double(pipe.syn.cloud.size()))));
    const ConformalityReport rep = conformality_report(
        pipe.syn.cloud, pipe.param, pipe.syn.cloud.size());
    std::vector<double> eg, dev;
    for (std::size_t s = 0; s < rep.sample_indices.size(); ++s) {
        const std::size_t idx = rep.sample_indices[s];
        const long i = long(idx % n), j = long(idx / n);
        const long ring = std::min({i, j, long(n) - 1 - i, long(n) - 1 - j});
        if (ring < 2) continue;
        eg.push_back(rep.eg_distortion[s]);
        dev.push_back(std::abs(rep.theta[s] - M_PI / 2.0));
    }
    const double med_eg = median(eg);
    const double med_dev = median(dev) * 180.0 / M_PI;
    out.expect(!eg.empty(), "no interior samples");
    out.expect(med_eg <= 0.15,
               "median |E-G|/max(E,G) " + num(med_eg) + " > 0.15");
    out.expect(med_dev <= 10.0,
               "median angle deviation " + num(med_dev) + " deg > 10 deg");
    if (out.pass)
        out.detail = "median |E-G|/max " + num(med_eg) + ", median angle dev " +
                     num(med_dev) + " deg";
    return out;
}

// 3. Curvature oracle: forward radius within 10% of 50 at >= 90% of interior
//    sphere samples; a plane reports the flat sentinel everywhere.
Outcome criterion3() {
    Outcome out;
    ToolConfig cfg;
    const RegressionResult sphere =
        analytic_regression(AnalyticSurface::Sphere, 50.0, cfg);
    const RegressionCheck* frac =
        find_check(sphere, "forward radius within 10% (fraction)");
    out.expect(frac != nullptr && frac->pass,
               frac ? "sphere radius fraction " + num(frac->value) + " < 0.9"
                    : "sphere radius check missing");

    Pipeline flat{plane_grid(31, 31, 1.0, 0.2, 9)};
    const Interpolator interp(flat.syn.cloud, flat.param);
    std::size_t non_flat = 0, total = 0;
    for (int j = 1; j <= 9; ++j)
        for (int i = 1; i <= 9; ++i) {
            const Vec2 pre(flat.param.domain.a * i / 10.0,
                           flat.param.domain.b * j / 10.0);
            const DerivativeSample s = sample_at_preimage(interp, pre);
            ++total;
            if (!curvature_radius(s, CurvatureDirection::U).flat ||
                !curvature_radius(s, CurvatureDirection::V).flat)
                ++non_flat;
        }
    out.expect(non_flat == 0, std::to_string(non_flat) + "/" +
                                  std::to_string(total) +
                                  " plane samples not flagged flat");
    if (out.pass)
        out.detail = "sphere fraction " + num(frac->value) + ", plane flat at " +
                     std::to_string(total) + "/" + std::to_string(total);
    return out;
}

// 4. Flat-spacing reproduction for both patterns, including the single-point
//    first path of the contour plan.
Outcome criterion4() {
    Outcome out;
    ToolConfig direction;
    const RegressionResult rect =
        analytic_regression(AnalyticSurface::Plane, 0.0, direction);
    for (const char* name :
         {"flat spacing lower bound (mm)", "flat spacing upper bound (mm)"}) {
        const RegressionCheck* c = find_check(rect, name);
        out.expect(c != nullptr && c->pass,
                   std::string(name) + (c ? " = " + num(c->value) + " vs limit " +
                                                num(c->limit)
                                          : " missing"));
    }

    ToolConfig contour;
    contour.pattern = PathPattern::ContourParallel;
    const RegressionResult disk =
        analytic_regression(AnalyticSurface::Plane, 0.0, contour);
    const RegressionCheck* center = find_check(disk, "center path is a single point");
    out.expect(center != nullptr && center->pass, "contour center path check");
    for (const char* name :
         {"flat spacing lower bound (mm)", "flat spacing upper bound (mm)"}) {
        const RegressionCheck* c = find_check(disk, name);
        out.expect(c != nullptr && c->pass,
                   std::string("contour ") + name +
                       (c ? " = " + num(c->value) : " missing"));
    }
    if (out.pass) {
        const double lo = find_check(rect, "flat spacing lower bound (mm)")->value;
        const double hi = find_check(rect, "flat spacing upper bound (mm)")->value;
        out.detail = "direction spacing [" + num(lo) + ", " + num(hi) +
                     "] mm, contour center is a single point";
    }
    return out;
}

// 5. Chord bound on the cylinder (R = 25), audited at 16 samples/segment.
Outcome criterion5() {
    Outcome out;
    ToolConfig cfg;
    const RegressionResult res =
        analytic_regression(AnalyticSurface::Cylinder, 25.0, cfg);
    const RegressionCheck* chord = find_check(res, "chord deviation max (mm)");
    out.expect(chord != nullptr && chord->pass,
               chord ? "chord deviation " + num(chord->value) + " > " +
                           num(chord->limit) + " mm"
                     : "chord check missing");
    if (out.pass)
        out.detail = "max chord deviation " + num(chord->value) + " mm (limit " +
                     num(chord->limit) + ")";
    return out;
}

// 6. Side-interval error buckets on the sphere-cap plan.
Outcome criterion6() {
    Outcome out;
    ToolConfig cfg;
    const RegressionResult res =
        analytic_regression(AnalyticSurface::Sphere, 50.0, cfg);
    const RegressionCheck* interior =
        find_check(res, "interior side-interval error mean (%)");
    const RegressionCheck* boundary =
        find_check(res, "near-boundary side-interval error mean (%)");
    out.expect(interior != nullptr && interior->pass,
               interior ? "interior mean eps " + num(interior->value) + "% > 5%"
                        : "interior check missing");
    out.expect(boundary != nullptr && boundary->pass,
               boundary ? "near-boundary mean eps " + num(boundary->value) +
                              "% > 8%"
                        : "near-boundary check missing");
    if (out.pass)
        out.detail = "interior mean eps " + num(interior->value) +
                     "%, near-boundary mean eps " + num(boundary->value) + "%";
    return out;
}

// 7. The near-boundary side step reduces to the interior one when the frame
//    is orthogonal and curvatures match, and widens by 1/cos of the frame
//    deviation on a flat sample.
Outcome criterion7() {
    Outcome out;
    ToolConfig cfg;

    DerivativeSample s;
    s.r_u = Vec3(1, 0, 0);
    s.r_v = Vec3(0, 1, 0);
    s.e = s.g = 1.0;
    s.l = -0.04;
    s.n = -0.02;
    s.sigma = 1.0;
    s.theta = M_PI / 2.0;
    const double interior = side_step_interior(s, cfg);
    const double boundary = side_step_boundary(s, -0.03, cfg);
    const double agree = std::abs(boundary - interior);
    out.expect(agree <= 1e-9, "orthogonal-frame disagreement " + num(agree));

    DerivativeSample t;
    t.r_u = Vec3(1, 0, 0);
    t.r_v = Vec3(0.5, std::sqrt(3.0) / 2.0, 0.0);
    t.e = t.g = 1.0;
    t.l = t.n = 0.0;
    t.sigma = 1.0;
    t.theta = M_PI / 3.0;
    const double ratio = side_step_boundary(t, 0.0, cfg) / side_step_interior(t, cfg);
    const double expected = 1.0 / std::cos(M_PI / 6.0);
    out.expect(std::abs(ratio - expected) <= 1e-12,
               "skewed-frame ratio " + num(ratio) + " != " + num(expected));
    if (out.pass)
        out.detail = "orthogonal agreement " + num(agree) + ", skew ratio " +
                     num(ratio);
    return out;
}

// 8. Determinism (byte-identical artifacts across runs) and scale invariance
//    (cloud and r, h, e scaled by 10 leave the error statistics unchanged).
Outcome criterion8() {
    Outcome out;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "isopath_acceptance";
    fs::create_directories(dir);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    ToolConfig cfg;
    for (int run = 0; run < 2; ++run) {
        Pipeline pipe{sphere_cap(50.0, 22.0, 1.0, 0.1, 4)};
        const Interpolator interp(pipe.syn.cloud, pipe.param);
        const auto paths = plan(interp, cfg);
        const std::string tag = run == 0 ? "a" : "b";
        write_param((dir / ("param_" + tag + ".txt")).string(), pipe.param);
        write_paths((dir / ("paths_" + tag + ".txt")).string(), paths);
    }
    out.expect(slurp(dir / "param_a.txt") == slurp(dir / "param_b.txt"),
               "param.txt differs between runs");
    out.expect(slurp(dir / "paths_a.txt") == slurp(dir / "paths_b.txt"),
               "paths.txt differs between runs");

    ToolConfig big;
    big.cutter_radius = 40.0;
    big.scallop_limit = 10.0;
    big.chord_limit = 0.1;
    const RegressionResult small_r =
        analytic_regression(AnalyticSurface::Sphere, 50.0, cfg);
    const RegressionResult big_r =
        analytic_regression(AnalyticSurface::Sphere, 500.0, big);
    for (const char* name : {"interior side-interval error mean (%)",
                             "near-boundary side-interval error mean (%)"}) {
        const RegressionCheck* a = find_check(small_r, name);
        const RegressionCheck* b = find_check(big_r, name);
        if (a == nullptr || b == nullptr) {
            out.expect(false, std::string(name) + " missing");
            continue;
        }
        const double diff = std::abs(a->value - b->value);
        out.expect(diff <= 0.1, std::string(name) + " shifts by " + num(diff) +
                                    " pp under 10x scaling");
        if (out.pass && out.detail.empty())
            out.detail = "byte-identical artifacts; eps shift " + num(diff) + " pp";
    }
    return out;
}

// 9. End-to-end runtime on a 10^4-point cloud.
Outcome criterion9() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    SyntheticCloud syn = plane_grid(100, 100, 1.0, 0.2, 7);
    PointCloud cloud(syn.cloud.points()); // drop ground truth: full pipeline
    compute_normals(cloud, kDefaultNeighborhoodSize);
    classify_boundary(cloud, kDefaultNeighborhoodSize, kDefaultGapThreshold);
    const WeightSet ws = build_laplacian(cloud);
    const BoundaryLoop loop = order_boundary(cloud, syn.breaks);
    const BoundaryMap bm = map_boundary_rect(cloud, loop);
    const Parameterization param = solve_parameterization(cloud, ws, bm);
    const Interpolator interp(cloud, param);
    ToolConfig cfg;
    const auto paths = plan(interp, cfg);
    double eps_mean = 0.0;
    std::size_t eps_n = 0;
    for (std::size_t i = 0; i + 1 < paths.size(); ++i) {
        const auto targets =
            predicted_side_intervals(paths[i], paths[i + 1], interp);
        const PathQualityReport rep =
            side_interval_error(paths[i], paths[i + 1], targets);
        eps_mean += rep.mean * rep.epsilon.size();
        eps_n += rep.epsilon.size();
    }
    if (eps_n) eps_mean /= double(eps_n);
    const double dt = seconds_since(t0);
    out.expect(paths.size() >= 2, "plan produced fewer than 2 paths");
    out.expect(dt < 60.0, "runtime " + num(dt) + " s >= 60 s");
    if (out.pass)
        out.detail = std::to_string(cloud.size()) + " points, " +
                     std::to_string(paths.size()) + " paths, mean eps " +
                     num(eps_mean) + "%, " + num(dt) + " s";
    return out;
}

} // namespace

int main() {
    struct Entry {
        const char* description;
        std::function<Outcome()> fn;
    };
    const std::vector<Entry> criteria = {
        {"linear precision of weights and harmonic map on a jittered plane",
         criterion1},
        {"conformality of the sphere-cap parameterization away from the "
         "boundary",
         criterion2},
        {"curvature oracle on sphere and plane", criterion3},
        {"flat-spacing reproduction for both path patterns", criterion4},
        {"chord-deviation bound on the cylinder plan", criterion5},
        {"side-interval error buckets on the sphere-cap plan", criterion6},
        {"near-boundary step consistency with the interior step", criterion7},
        {"deterministic artifacts and scale invariance", criterion8},
        {"end-to-end runtime on a 10^4-point cloud", criterion9},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        if (!out.pass) ++failures;
        std::cout << "Criterion " << (i + 1) << ": "
                  << (out.pass ? "PASS" : "FAIL") << " — "
                  << criteria[i].description
                  << (out.detail.empty() ? "" : " (" + out.detail + ")") << "\n";
    }
    return failures == 0 ? 0 : 1;
}
