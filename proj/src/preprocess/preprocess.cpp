#include "opdet/preprocess/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace opdet::preprocess {

RasterF median_composite(const std::vector<RasterF>& stack) {
    if (stack.empty()) throw std::runtime_error("empty stack");
    const int w = stack.front().width;
    const int h = stack.front().height;
    for (const auto& r : stack) {
        r.validate();
        if (r.width != w || r.height != h) throw std::runtime_error("shape mismatch");
    }

    RasterF out;
    out.width = w;
    out.height = h;
    out.values.resize(static_cast<std::size_t>(w) * h);
    for (const auto& r : stack) {
        if (r.nodata) {
            out.nodata = r.nodata;
            break;
        }
    }
    const float fill = out.nodata ? *out.nodata : std::numeric_limits<float>::quiet_NaN();

    std::vector<float> vals;
    vals.reserve(stack.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        vals.clear();
        for (const auto& r : stack) {
            const float v = r.values[i];
            if (!r.is_nodata(v)) vals.push_back(v);
        }
        if (vals.empty()) {
            if (!out.nodata) out.nodata = std::numeric_limits<float>::quiet_NaN();
            out.values[i] = fill;
            continue;
        }
        const std::size_t n = vals.size();
        std::nth_element(vals.begin(), vals.begin() + n / 2, vals.end());
        const float upper = vals[n / 2];
        if (n % 2 == 1) {
            out.values[i] = upper;
        } else {
            const float lower = *std::max_element(vals.begin(), vals.begin() + n / 2);
            out.values[i] = 0.5f * (lower + upper);
        }
    }
    return out;
}

std::uint8_t quantize_db_value(double db, const PipelineConfig& cfg) {
    const double t = std::clamp((db - cfg.db_lo) / (cfg.db_hi - cfg.db_lo), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(t * 255.0 + 0.5));
}

Raster8 quantize_db(const RasterF& raster, const PipelineConfig& cfg) {
    raster.validate();
    cfg.validate();
    Raster8 out;
    out.width = raster.width;
    out.height = raster.height;
    out.values.resize(raster.values.size());
    for (std::size_t i = 0; i < raster.values.size(); ++i) {
        const float v = raster.values[i];
        out.values[i] = raster.is_nodata(v) ? 0 : quantize_db_value(v, cfg);
    }
    return out;
}

double dequantize_db(std::uint8_t value, const PipelineConfig& cfg) {
    return cfg.db_lo + (static_cast<double>(value) / 255.0) * (cfg.db_hi - cfg.db_lo);
}

namespace {

// Local equirectangular meters-per-degree scale; plumbing for synthesizing
// tile geotransforms, not a geodesy layer.
constexpr double kMetersPerDegree = 111320.0;

GeoTransform tile_geotransform(double x0_m, double y1_m, const PipelineConfig& cfg,
                               const GeoAnchor& anchor) {
    const double lat_rad = anchor.lat0 * 3.14159265358979323846 / 180.0;
    const double m_per_deg_lon = kMetersPerDegree * std::cos(lat_rad);
    const double m_per_deg_lat = kMetersPerDegree;
    // Pixel (0,0) sits at the tile's north-west corner; y grows southward.
    GeoTransform gt;
    gt.a = anchor.lon0 + x0_m / m_per_deg_lon;
    gt.b = cfg.pixel_size_m / m_per_deg_lon;
    gt.c = 0.0;
    gt.d = anchor.lat0 + y1_m / m_per_deg_lat;
    gt.e = 0.0;
    gt.f = -cfg.pixel_size_m / m_per_deg_lat;
    return gt;
}

}  // namespace

std::vector<TileSpec> make_grid(const std::array<double, 4>& roi_bounds_m,
                                const PipelineConfig& cfg, const GeoAnchor& anchor) {
    cfg.validate();
    const double x0 = roi_bounds_m[0], y0 = roi_bounds_m[1];
    const double x1 = roi_bounds_m[2], y1 = roi_bounds_m[3];
    if (!(x1 > x0 && y1 > y0)) throw std::runtime_error("non-positive ROI extent");

    std::vector<TileSpec> tiles;
    for (int j = 0; y0 + j * cfg.grid_step_m < y1; ++j) {
        for (int i = 0; x0 + i * cfg.grid_step_m < x1; ++i) {
            const double tx0 = x0 + i * cfg.grid_step_m;
            const double ty0 = y0 + j * cfg.grid_step_m;
            TileSpec t;
            t.tile_id = "tile_" + std::to_string(i) + "_" + std::to_string(j);
            t.bounds_m = {tx0, ty0, tx0 + cfg.grid_tile_m, ty0 + cfg.grid_tile_m};
            t.geotransform = tile_geotransform(tx0, ty0 + cfg.grid_tile_m, cfg, anchor);
            tiles.push_back(std::move(t));
        }
    }
    return tiles;
}

std::vector<int> chip_anchors(int dim, int chip_size, int stride) {
    std::vector<int> anchors;
    for (int a = 0; a + chip_size <= dim; a += stride) anchors.push_back(a);
    if (anchors.empty() || anchors.back() + chip_size < dim) anchors.push_back(dim - chip_size);
    return anchors;
}

std::vector<Chip> chip_tile(const Raster8& raster, const GeoTransform& gt,
                            const std::string& tile_id, const PipelineConfig& cfg) {
    raster.validate();
    cfg.validate();
    const int cs = cfg.chip_size;
    if (raster.width < cs || raster.height < cs) throw std::runtime_error("tile too small");
    const int stride = static_cast<int>(std::floor(cs * (1.0 - cfg.chip_overlap) + 0.5));

    const std::vector<int> xs = chip_anchors(raster.width, cs, stride);
    const std::vector<int> ys = chip_anchors(raster.height, cs, stride);

    std::vector<Chip> chips;
    chips.reserve(xs.size() * ys.size());
    for (std::size_t row = 0; row < ys.size(); ++row) {
        for (std::size_t col = 0; col < xs.size(); ++col) {
            const int ox = xs[col];
            const int oy = ys[row];
            Chip c;
            c.chip_id = tile_id + "_" + std::to_string(col) + "_" + std::to_string(row);
            c.offset_px = {ox, oy};
            c.geotransform = gt.translated(ox, oy);
            c.raster.width = cs;
            c.raster.height = cs;
            c.raster.values.resize(static_cast<std::size_t>(cs) * cs);
            for (int y = 0; y < cs; ++y) {
                const auto* src = &raster.values[static_cast<std::size_t>(oy + y) * raster.width + ox];
                std::copy(src, src + cs, &c.raster.values[static_cast<std::size_t>(y) * cs]);
            }
            chips.push_back(std::move(c));
        }
    }
    return chips;
}

}  // namespace opdet::preprocess
