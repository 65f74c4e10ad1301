#include "isopath/diffgeo.hpp"
#include "isopath/param.hpp"

#include <algorithm>
#include <cmath>

namespace isopath {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

double ConformalityReport::median_eg() const { return median_of(eg_distortion); }

double ConformalityReport::median_theta_dev() const {
    std::vector<double> dev;
    dev.reserve(theta.size());
    for (double t : theta) dev.push_back(std::abs(t - M_PI / 2.0));
    return median_of(dev);
}

double ConformalityReport::mean_eg() const {
    if (eg_distortion.empty()) return 0.0;
    double s = 0;
    for (double x : eg_distortion) s += x;
    return s / static_cast<double>(eg_distortion.size());
}

ConformalityReport conformality_report(const PointCloud& cloud,
                                       const Parameterization& param,
                                       std::size_t samples, std::size_t k,
                                       Execution exec) {
    std::vector<std::uint32_t> interior;
    for (std::uint32_t i = 0; i < cloud.size(); ++i)
        if (cloud.tag(i) == PointTag::Interior) interior.push_back(i);

    std::vector<std::uint32_t> chosen;
    if (samples == 0 || samples >= interior.size()) {
        chosen = interior;
    } else {
        const double stride =
            static_cast<double>(interior.size()) / static_cast<double>(samples);
        for (std::size_t s = 0; s < samples; ++s)
            chosen.push_back(interior[static_cast<std::size_t>(s * stride)]);
    }

    const Interpolator interp(cloud, param, k);
    struct Slot {
        bool ok = false;
        double eg = 0, fe = 0, theta = 0;
    };
    std::vector<Slot> slots(chosen.size());
    for_each_index(chosen.size(), exec, [&](std::size_t s) {
        try {
            const DerivativeSample d =
                derivatives(interp, Chart::cartesian(param.uv[chosen[s]]));
            slots[s].eg = std::abs(d.e - d.g) / std::max(d.e, d.g);
            slots[s].fe = std::abs(d.r_u.dot(d.r_v)) / d.e;
            slots[s].theta = d.theta;
            slots[s].ok = true;
        } catch (const Error&) {
            // Stencil does not fit (too close to the boundary); skip.
        }
    });

    ConformalityReport rep;
    for (std::size_t s = 0; s < chosen.size(); ++s) {
        if (!slots[s].ok) continue;
        rep.sample_indices.push_back(chosen[s]);
        rep.eg_distortion.push_back(slots[s].eg);
        rep.f_over_e.push_back(slots[s].fe);
        rep.theta.push_back(slots[s].theta);
    }
    return rep;
}

} // namespace isopath
