#pragma once

#include <array>
#include <string>
#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"

namespace opdet::preprocess {

/// Per-pixel temporal median over an aligned stack. Nodata inputs are
/// excluded pixel-wise; even counts take the mean of the two middle values.
/// A pixel with no valid input stays nodata. Throws "empty stack" /
/// "shape mismatch".
RasterF median_composite(const std::vector<RasterF>& stack);

/// Clip [db_lo, db_hi] and map linearly onto 0..255, rounding half up.
/// Nodata pixels map to 0.
Raster8 quantize_db(const RasterF& raster, const PipelineConfig& cfg);

/// Quantized value of a single dB sample (the scalar core of quantize_db).
std::uint8_t quantize_db_value(double db, const PipelineConfig& cfg);

/// Inverse of the linear 8-bit mapping: the dB value a count represents.
double dequantize_db(std::uint8_t value, const PipelineConfig& cfg);

/// One grid tile: planar bounds in meters plus a geotransform for its
/// pixel grid at cfg.pixel_size_m resolution.
struct TileSpec {
    std::string tile_id;
    std::array<double, 4> bounds_m{};  // x0, y0, x1, y1
    GeoTransform geotransform;
};

/// Anchor for converting planar meters to EPSG:4326 degrees. The grid itself
/// works in meters; this supplies tile geotransforms via a local
/// equirectangular approximation around (lon0, lat0).
struct GeoAnchor {
    double lon0 = 0.0;
    double lat0 = 0.0;
};

/// Overlapping tile grid over a planar ROI: origins every grid_step_m,
/// each tile spanning grid_tile_m (10 km overlap at the default sizes).
std::vector<TileSpec> make_grid(const std::array<double, 4>& roi_bounds_m,
                                const PipelineConfig& cfg,
                                const GeoAnchor& anchor = {});

/// A detector-ready window of a tile raster.
struct Chip {
    std::string chip_id;  // "{tile_id}_{col}_{row}"
    Raster8 raster;
    std::pair<int, int> offset_px{0, 0};
    GeoTransform geotransform;
};

/// Chip anchor positions along one axis: multiples of the stride plus an
/// edge-snapped final anchor when the regular ones fall short.
std::vector<int> chip_anchors(int dim, int chip_size, int stride);

/// Cut a tile into chip_size x chip_size chips with the configured overlap
/// (stride = round(chip_size * (1 - chip_overlap))). Throws "tile too small"
/// when the raster cannot host a single chip.
std::vector<Chip> chip_tile(const Raster8& raster, const GeoTransform& gt,
                            const std::string& tile_id, const PipelineConfig& cfg);

}  // namespace opdet::preprocess
