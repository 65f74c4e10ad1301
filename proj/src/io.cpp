#include "isopath/io.hpp"

#include "isopath/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace isopath {

namespace {

[[noreturn]] void bad_input(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::InvalidInput, path + ": " + what);
}

std::ifstream open_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad_input(path, "cannot open file");
    return in;
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string full(double v) { return fmt("%.17g", v); }
std::string fixed6(double v) { return fmt("%.6f", v); }

} // namespace

CloudData read_xyz(const std::string& path) {
    std::ifstream in = open_text(path);
    CloudData out;
    std::string line;
    std::size_t lineno = 0;
    bool with_normals = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(strip_comment(line));
        double x, y, z;
        if (!(ss >> x)) continue; // blank or comment-only line
        if (!(ss >> y >> z))
            bad_input(path, "line " + std::to_string(lineno) +
                                ": expected at least 3 numbers");
        out.points.push_back({x, y, z});
        double nx, ny, nz;
        if (ss >> nx) {
            if (!(ss >> ny >> nz))
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": expected 3 or 6 numbers");
            with_normals = true;
            out.normals.push_back({nx, ny, nz});
        } else if (with_normals) {
            bad_input(path, "line " + std::to_string(lineno) +
                                ": inconsistent column count");
        }
        if (with_normals && out.normals.size() != out.points.size())
            bad_input(path, "line " + std::to_string(lineno) +
                                ": inconsistent column count");
    }
    if (out.points.empty()) bad_input(path, "no points");
    return out;
}

namespace {

struct PlyProperty {
    std::string name;
    std::size_t size = 0;       // bytes of the value type
    bool is_list = false;
    std::size_t count_size = 0; // bytes of the list count type
    bool is_float = false;      // float or double scalar
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> props;
};

std::size_t ply_type_size(const std::string& t, const std::string& path) {
    if (t == "char" || t == "int8" || t == "uchar" || t == "uint8") return 1;
    if (t == "short" || t == "int16" || t == "ushort" || t == "uint16") return 2;
    if (t == "int" || t == "int32" || t == "uint" || t == "uint32" ||
        t == "float" || t == "float32")
        return 4;
    if (t == "double" || t == "float64") return 8;
    bad_input(path, "unknown ply property type '" + t + "'");
}

double read_binary_scalar(std::istream& in, std::size_t size, bool is_float,
                          const std::string& path) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), size))
        bad_input(path, "truncated binary payload");
    if (is_float) {
        if (size == 4) {
            float f;
            std::memcpy(&f, buf, 4);
            return f;
        }
        double d;
        std::memcpy(&d, buf, 8);
        return d;
    }
    std::uint64_t u = 0;
    for (std::size_t i = 0; i < size; ++i) u |= std::uint64_t(buf[i]) << (8 * i);
    return static_cast<double>(u);
}

} // namespace

CloudData read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bad_input(path, "cannot open file");
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "ply")
        bad_input(path, "not a ply file");
    bool binary = false, format_seen = false;
    std::vector<PlyElement> elements;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string kw;
        ss >> kw;
        if (kw == "comment" || kw == "obj_info" || kw.empty()) continue;
        if (kw == "format") {
            std::string f;
            ss >> f;
            if (f == "ascii")
                binary = false;
            else if (f == "binary_little_endian")
                binary = true;
            else
                bad_input(path, "unsupported ply format '" + f + "'");
            format_seen = true;
        } else if (kw == "element") {
            PlyElement el;
            ss >> el.name >> el.count;
            elements.push_back(el);
        } else if (kw == "property") {
            if (elements.empty()) bad_input(path, "property before element");
            std::string t;
            ss >> t;
            PlyProperty p;
            if (t == "list") {
                std::string ct, vt;
                ss >> ct >> vt >> p.name;
                p.is_list = true;
                p.count_size = ply_type_size(ct, path);
                p.size = ply_type_size(vt, path);
            } else {
                ss >> p.name;
                p.size = ply_type_size(t, path);
                p.is_float = t == "float" || t == "float32" || t == "double" ||
                             t == "float64";
            }
            elements.back().props.push_back(p);
        } else if (kw == "end_header") {
            break;
        } else {
            bad_input(path, "unexpected header keyword '" + kw + "'");
        }
    }
    if (!format_seen) bad_input(path, "missing ply format line");

    CloudData out;
    for (const PlyElement& el : elements) {
        const bool vertex = el.name == "vertex";
        int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
        for (std::size_t p = 0; p < el.props.size(); ++p) {
            const std::string& n = el.props[p].name;
            const int ip = static_cast<int>(p);
            if (n == "x") ix = ip;
            if (n == "y") iy = ip;
            if (n == "z") iz = ip;
            if (n == "nx") inx = ip;
            if (n == "ny") iny = ip;
            if (n == "nz") inz = ip;
        }
        if (vertex && (ix < 0 || iy < 0 || iz < 0))
            bad_input(path, "vertex element lacks x/y/z properties");
        const bool has_normals = vertex && inx >= 0 && iny >= 0 && inz >= 0;
        for (std::size_t row = 0; row < el.count; ++row) {
            std::vector<double> vals(el.props.size(), 0.0);
            if (binary) {
                for (std::size_t p = 0; p < el.props.size(); ++p) {
                    const PlyProperty& pr = el.props[p];
                    if (pr.is_list) {
                        const double cnt =
                            read_binary_scalar(in, pr.count_size, false, path);
                        for (std::size_t c = 0; c < std::size_t(cnt); ++c)
                            read_binary_scalar(in, pr.size, pr.is_float, path);
                    } else {
                        vals[p] = read_binary_scalar(in, pr.size, pr.is_float,
                                                     path);
                    }
                }
            } else {
                std::string dl;
                do {
                    if (!std::getline(in, dl)) bad_input(path, "truncated data");
                } while (strip_comment(dl).find_first_not_of(" \t\r") ==
                         std::string::npos);
                std::istringstream ss(dl);
                for (std::size_t p = 0; p < el.props.size(); ++p) {
                    const PlyProperty& pr = el.props[p];
                    if (pr.is_list) {
                        std::size_t cnt;
                        if (!(ss >> cnt)) bad_input(path, "bad list count");
                        double tmp;
                        for (std::size_t c = 0; c < cnt; ++c)
                            if (!(ss >> tmp)) bad_input(path, "bad list entry");
                    } else if (!(ss >> vals[p])) {
                        bad_input(path, "bad data row for element '" + el.name +
                                            "'");
                    }
                }
            }
            if (vertex) {
                out.points.push_back({vals[ix], vals[iy], vals[iz]});
                if (has_normals)
                    out.normals.push_back({vals[inx], vals[iny], vals[inz]});
            }
        }
    }
    if (out.points.empty()) bad_input(path, "no vertex data");
    return out;
}

CloudData read_cloud(const std::string& path) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == "ply" ? read_ply(path) : read_xyz(path);
}

std::vector<std::uint32_t> read_breaks(const std::string& path) {
    std::ifstream in = open_text(path);
    std::vector<std::uint32_t> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(strip_comment(line));
        long long v;
        while (ss >> v) {
            if (v < 0)
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": negative break index");
            out.push_back(static_cast<std::uint32_t>(v));
        }
    }
    if (out.empty()) bad_input(path, "no break indices");
    return out;
}

void write_param(const std::string& path, const Parameterization& param) {
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    const Domain& d = param.domain;
    if (d.kind == Domain::Kind::Rect)
        out << "# domain rect " << full(d.a) << " " << full(d.b) << "\n";
    else
        out << "# domain disk " << full(d.r0) << "\n";
    for (std::size_t i = 0; i < param.uv.size(); ++i)
        out << i << " " << full(param.uv[i].x()) << " " << full(param.uv[i].y())
            << "\n";
    if (!out) bad_input(path, "write failed");
}

Parameterization read_param(const std::string& path) {
    std::ifstream in = open_text(path);
    std::string line;
    if (!std::getline(in, line)) bad_input(path, "empty file");
    std::istringstream hs(line);
    std::string hash, key, kind;
    hs >> hash >> key >> kind;
    if (hash != "#" || key != "domain")
        bad_input(path, "missing '# domain ...' header");
    Parameterization param;
    if (kind == "rect") {
        param.domain.kind = Domain::Kind::Rect;
        if (!(hs >> param.domain.a >> param.domain.b))
            bad_input(path, "rect header needs two extents");
    } else if (kind == "disk") {
        param.domain.kind = Domain::Kind::Disk;
        if (!(hs >> param.domain.r0))
            bad_input(path, "disk header needs a radius");
    } else {
        bad_input(path, "unknown domain kind '" + kind + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(strip_comment(line));
        std::size_t i;
        double u, v;
        if (!(ss >> i)) continue;
        if (!(ss >> u >> v))
            bad_input(path, "line " + std::to_string(lineno) +
                                ": expected 'i u v'");
        if (i != param.uv.size())
            bad_input(path, "line " + std::to_string(lineno) +
                                ": indices must be consecutive from 0");
        param.uv.push_back({u, v});
    }
    if (param.uv.empty()) bad_input(path, "no parameter rows");
    return param;
}

namespace {

std::string pattern_name(PathPattern p) {
    return p == PathPattern::DirectionParallel ? "direction" : "contour";
}

} // namespace

void write_paths(const std::string& path, const std::vector<ToolPath>& paths) {
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    for (const ToolPath& tp : paths) {
        out << "PATH " << tp.index << " " << pattern_name(tp.pattern) << "\n";
        for (const PathPoint& pt : tp.points)
            out << fixed6(pt.position.x()) << " " << fixed6(pt.position.y())
                << " " << fixed6(pt.position.z()) << " "
                << fixed6(pt.preimage.x()) << " " << fixed6(pt.preimage.y())
                << "\n";
    }
    if (!out) bad_input(path, "write failed");
}

std::vector<ToolPath> read_paths(const std::string& path) {
    std::ifstream in = open_text(path);
    std::vector<ToolPath> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "PATH") {
            ToolPath tp;
            std::string pat;
            if (!(ss >> tp.index >> pat))
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": malformed PATH header");
            if (pat == "direction")
                tp.pattern = PathPattern::DirectionParallel;
            else if (pat == "contour")
                tp.pattern = PathPattern::ContourParallel;
            else
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": unknown pattern '" + pat + "'");
            out.push_back(std::move(tp));
        } else {
            if (out.empty())
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": point row before any PATH header");
            std::istringstream rs(line);
            PathPoint pt;
            double x, y, z, u, v;
            if (!(rs >> x >> y >> z >> u >> v))
                bad_input(path, "line " + std::to_string(lineno) +
                                    ": expected 'x y z u v'");
            pt.position = {x, y, z};
            pt.preimage = {u, v};
            out.back().points.push_back(pt);
        }
    }
    if (out.empty()) bad_input(path, "no paths");
    for (const ToolPath& tp : out)
        if (tp.points.empty())
            bad_input(path, "path " + std::to_string(tp.index) + " has no points");
    return out;
}

namespace {

struct SvgFrame {
    double min_x, min_y, span;
    static constexpr double kSize = 800.0, kPad = 40.0;

    double x(double u) const {
        return kPad + (u - min_x) / span * (kSize - 2 * kPad);
    }
    double y(double v) const {
        return kSize - kPad - (v - min_y) / span * (kSize - 2 * kPad);
    }
};

SvgFrame frame_for(const Domain& d) {
    if (d.kind == Domain::Kind::Rect)
        return {0.0, 0.0, std::max({d.a, d.b, 1e-12})};
    return {-d.r0, -d.r0, std::max(2.0 * d.r0, 1e-12)};
}

void svg_open(std::ofstream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << SvgFrame::kSize
        << "\" height=\"" << SvgFrame::kSize << "\" viewBox=\"0 0 "
        << SvgFrame::kSize << " " << SvgFrame::kSize << "\">\n";
}

void svg_outline(std::ofstream& out, const Domain& d, const SvgFrame& f) {
    if (d.kind == Domain::Kind::Rect) {
        out << "<rect x=\"" << f.x(0) << "\" y=\"" << f.y(d.b) << "\" width=\""
            << f.x(d.a) - f.x(0) << "\" height=\"" << f.y(0) - f.y(d.b)
            << "\" fill=\"none\" stroke=\"#999\"/>\n";
    } else {
        out << "<circle cx=\"" << f.x(0) << "\" cy=\"" << f.y(0) << "\" r=\""
            << f.x(d.r0) - f.x(0) << "\" fill=\"none\" stroke=\"#999\"/>\n";
    }
}

} // namespace

void write_domain_svg(const std::string& path, const PointCloud& cloud,
                      const Parameterization& param) {
    if (cloud.size() != param.uv.size())
        throw Error(ErrorCode::InvalidInput,
                    "write_domain_svg: cloud/parameterization size mismatch");
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    const SvgFrame f = frame_for(param.domain);
    svg_open(out);
    svg_outline(out, param.domain, f);
    for (std::size_t i = 0; i < param.uv.size(); ++i) {
        const bool bnd = cloud.tag(i) == PointTag::Boundary;
        out << "<circle cx=\"" << fixed6(f.x(param.uv[i].x())) << "\" cy=\""
            << fixed6(f.y(param.uv[i].y())) << "\" r=\"" << (bnd ? 2.5 : 1.2)
            << "\" fill=\"" << (bnd ? "#d40" : "#06c") << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) bad_input(path, "write failed");
}

void write_paths_svg(const std::string& path, const Domain& domain,
                     const std::vector<ToolPath>& paths) {
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    const SvgFrame f = frame_for(domain);
    svg_open(out);
    svg_outline(out, domain, f);
    for (const ToolPath& tp : paths) {
        if (tp.points.size() == 1) {
            const Vec2& pre = tp.points[0].preimage;
            const Vec2 q = domain.kind == Domain::Kind::Disk
                               ? Vec2(pre.x() * std::cos(pre.y()),
                                      pre.x() * std::sin(pre.y()))
                               : pre;
            out << "<circle cx=\"" << fixed6(f.x(q.x())) << "\" cy=\""
                << fixed6(f.y(q.y())) << "\" r=\"3\" fill=\"#080\"/>\n";
            continue;
        }
        out << "<polyline fill=\"none\" stroke=\"#080\" stroke-width=\"1\" "
               "points=\"";
        for (const PathPoint& pt : tp.points) {
            const Vec2& pre = pt.preimage;
            const Vec2 q = domain.kind == Domain::Kind::Disk
                               ? Vec2(pre.x() * std::cos(pre.y()),
                                      pre.x() * std::sin(pre.y()))
                               : pre;
            out << fixed6(f.x(q.x())) << "," << fixed6(f.y(q.y())) << " ";
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) bad_input(path, "write failed");
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    for (const auto& [k, v] : kv) out << k << ": " << v << "\n";
    if (!out) bad_input(path, "write failed");
}

void write_epsilon_csv(const std::string& path,
                       const std::vector<PathQualityReport>& reports) {
    std::ofstream out(path);
    if (!out) bad_input(path, "cannot open for writing");
    out << "pair,point,epsilon_pct\n";
    for (std::size_t r = 0; r < reports.size(); ++r)
        for (std::size_t i = 0; i < reports[r].epsilon.size(); ++i)
            out << r << "," << i << "," << fixed6(reports[r].epsilon[i]) << "\n";
    if (!out) bad_input(path, "write failed");
}

} // namespace isopath
