#pragma once

#include <utility>
#include <vector>

namespace opdet::synthgen {

/// A simulated radar-backscatter kernel: anisotropic Gaussian profile with
/// randomized size, orientation, peak intensity, and spread. Peaks stay at or
/// above the dark-pixel threshold so stamped objects survive postprocessing.
struct KernelSpec {
    std::pair<int, int> size{9, 9};    // (h, w), odd
    double orientation_deg = 0.0;      // [0, 180)
    double peak = 200.0;               // [dark_pixel_threshold, 255]
    std::pair<double, double> sigma{3.0, 2.0};  // (major, minor), px

    void validate(int peak_floor = 150) const;
};

/// Rendered kernel values, row-major h x w.
struct KernelStamp {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// value(p) = peak * exp(-1/2 (u^2/sigma_major^2 + v^2/sigma_minor^2)) with
/// (u,v) the pixel offset from the center rotated by orientation_deg. The
/// center value equals peak exactly.
KernelStamp render_kernel(const KernelSpec& spec);

/// Dilation radius used when deriving a label box around a stamped point:
/// the stamp's half-diagonal (worst case under rotation), floored so the box
/// always contains the rounded stamp placement.
double kernel_dilation_radius(const KernelSpec& spec);

}  // namespace opdet::synthgen
