#include "isopath/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace isopath;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd =
        std::string(ISOPATH_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "isopath_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_cloud_xyz(const fs::path& p, const PointCloud& cloud) {
    std::ofstream out(p);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& pt = cloud.point(i);
        const Vec3& n = cloud.normal(i);
        out << pt.x() << " " << pt.y() << " " << pt.z() << " " << n.x() << " "
            << n.y() << " " << n.z() << "\n";
    }
}

void write_breaks_file(const fs::path& p, const std::vector<std::uint32_t>& b) {
    std::ofstream out(p);
    for (auto i : b) out << i << "\n";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Job {
    fs::path dir, cloud, breaks;

    explicit Job(const std::string& name, const SyntheticCloud& syn)
        : dir(fresh_dir(name)), cloud(dir / "cloud.xyz"), breaks(dir / "breaks.txt") {
        write_cloud_xyz(cloud, syn.cloud);
        write_breaks_file(breaks, syn.breaks);
    }

    std::string shared() const {
        return "--in " + cloud.string() + " --breaks " + breaks.string() +
               " --out " + dir.string();
    }
};

} // namespace

TEST_CASE("param, plan, verify happy path") {
    const Job job("happy", plane_grid(21, 21, 1.0));
    CHECK(run("param " + job.shared()) == 0);
    CHECK(fs::exists(job.dir / "param.txt"));
    CHECK(fs::exists(job.dir / "domain.svg"));

    CHECK(run("plan " + job.shared()) == 0);
    CHECK(fs::exists(job.dir / "paths.txt"));
    CHECK(fs::exists(job.dir / "paths.svg"));
    CHECK(fs::exists(job.dir / "report.txt"));

    CHECK(run("verify --in " + job.cloud.string() + " --out " +
              job.dir.string()) == 0);
    CHECK(fs::exists(job.dir / "epsilon.csv"));
}

TEST_CASE("plan output is deterministic across runs") {
    const Job a("det_a", plane_grid(21, 21, 1.0, 0.15, 3));
    const Job b("det_b", plane_grid(21, 21, 1.0, 0.15, 3));
    REQUIRE(run("plan " + a.shared()) == 0);
    REQUIRE(run("plan " + b.shared()) == 0);
    CHECK(slurp(a.dir / "param.txt") == slurp(b.dir / "param.txt"));
    CHECK(slurp(a.dir / "paths.txt") == slurp(b.dir / "paths.txt"));
}

TEST_CASE("three break points exit with code 2") {
    SyntheticCloud syn = plane_grid(15, 15, 1.0);
    syn.breaks.pop_back();
    const Job job("breaks3", syn);
    CHECK(run("param " + job.shared()) == 2);
}

TEST_CASE("scallop limit at the cutter radius exits with code 2") {
    const Job job("badcfg", plane_grid(15, 15, 1.0));
    CHECK(run("plan " + job.shared() + " --scallop 5 --cutter 4") == 2);
}

TEST_CASE("analytic oracle runs from the command line") {
    const fs::path dir = fresh_dir("analytic");
    CHECK(run("verify --analytic plane --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "epsilon.csv"));
    CHECK(run("verify --analytic torus --out " + dir.string()) == 2);
}

TEST_CASE("disconnected cloud exits with the solver code") {
    // A grid plus a far-away closed blob: the blob has no boundary points,
    // so its Laplace block is singular and the solve must report failure.
    SyntheticCloud syn = plane_grid(15, 15, 1.0);
    std::vector<Vec3> pts = syn.cloud.points();
    std::vector<Vec3> nrm = syn.cloud.normals();
    const int blob_n = 200;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < blob_n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / blob_n;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * i;
        const Vec3 u(r * std::cos(phi), r * std::sin(phi), z);
        pts.push_back(Vec3(100.0, 100.0, 0.0) + 2.0 * u);
        nrm.push_back(u);
    }
    PointCloud combined(pts);
    combined.set_normals(nrm);
    SyntheticCloud disc{std::move(combined), syn.breaks};
    const Job job("disconnected", disc);
    CHECK(run("param " + job.shared()) == 4);
}

TEST_CASE("verify without inputs exits with code 2") {
    const fs::path dir = fresh_dir("noverify");
    CHECK(run("verify --out " + dir.string()) == 2);
    // --in given but no param.txt/paths.txt in the job directory.
    const Job job("nofiles", plane_grid(11, 11, 1.0));
    CHECK(run("verify --in " + job.cloud.string() + " --out " +
              job.dir.string()) == 2);
}

TEST_CASE("unknown flags and missing subcommands exit with code 2") {
    CHECK(run("plan --nonsense") == 2);
    CHECK(run("") == 2);
    CHECK(run("--help") == 0);
}
