#include "opdet/synthgen/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace opdet::synthgen {

void KernelSpec::validate(int peak_floor) const {
    const int h = size.first, w = size.second;
    if (h < 1 || w < 1 || h % 2 == 0 || w % 2 == 0)
        throw std::invalid_argument("kernel size must be odd and >= 1");
    if (!(orientation_deg >= 0.0 && orientation_deg < 180.0))
        throw std::invalid_argument("kernel orientation must be in [0,180)");
    if (!(peak >= peak_floor && peak <= 255.0))
        throw std::invalid_argument("kernel peak must be in [threshold,255]");
    if (!(sigma.second > 0.0 && sigma.first >= sigma.second))
        throw std::invalid_argument("kernel sigma must satisfy major >= minor > 0");
}

KernelStamp render_kernel(const KernelSpec& spec) {
    spec.validate();
    const int h = spec.size.first, w = spec.size.second;
    KernelStamp stamp;
    stamp.height = h;
    stamp.width = w;
    stamp.values.resize(static_cast<std::size_t>(h) * w);

    const double theta = spec.orientation_deg * 3.14159265358979323846 / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double inv_major = 1.0 / (spec.sigma.first * spec.sigma.first);
    const double inv_minor = 1.0 / (spec.sigma.second * spec.sigma.second);
    const int cx = (w - 1) / 2, cy = (h - 1) / 2;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double u = dx * ct + dy * st;
            const double v = -dx * st + dy * ct;
            stamp.values[static_cast<std::size_t>(y) * w + x] =
                spec.peak * std::exp(-0.5 * (u * u * inv_major + v * v * inv_minor));
        }
    }
    return stamp;
}

double kernel_dilation_radius(const KernelSpec& spec) {
    const double mx = (spec.size.second - 1) / 2.0;
    const double my = (spec.size.first - 1) / 2.0;
    const double half_diag = std::hypot(mx, my);
    // floor keeps the box a superset of the stamp after center rounding
    return std::max(half_diag, std::max(mx, my) + 0.5);
}

}  // namespace opdet::synthgen
