#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opdet {

/// Floating-point raster of radar backscatter (sigma0, dB), row-major.
/// An optional sentinel marks invalid pixels (irregular scene footprints).
struct RasterF {
    int width = 0;
    int height = 0;
    std::vector<float> values;
    std::optional<float> nodata;

    static RasterF filled(int width, int height, float value);

    std::size_t size() const { return values.size(); }
    float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    /// NaN always counts as nodata, declared sentinel or not.
    bool is_nodata(float v) const;
    void validate() const;
};

/// 8-bit intensity raster, row-major.
struct Raster8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    static Raster8 filled(int width, int height, std::uint8_t value);

    std::size_t size() const { return values.size(); }
    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    void validate() const;
};

/// Affine mapping from pixel (col,row) to geographic (lon,lat) degrees:
///   lon = a + b*col + c*row
///   lat = d + e*col + f*row
/// Coordinates are always EPSG:4326.
struct GeoTransform {
    double a = 0.0, b = 1.0, c = 0.0;
    double d = 0.0, e = 0.0, f = 1.0;

    static constexpr const char* kCrs = "EPSG:4326";

    double det() const { return b * f - c * e; }
    bool invertible() const { return det() != 0.0; }

    std::pair<double, double> apply(double col, double row) const {
        return {a + b * col + c * row, d + e * col + f * row};
    }

    /// Inverse affine (lon,lat) -> (col,row). Throws on singular transforms.
    GeoTransform inverse() const;

    /// Transform of a sub-window whose pixel (0,0) sits at (col_off,row_off)
    /// of this raster.
    GeoTransform translated(double col_off, double row_off) const {
        return {a + b * col_off + c * row_off, b, c,
                d + e * col_off + f * row_off, e, f};
    }
};

/// Continuous pixel box, half-open ([x0,x1) x [y0,y1)), origin top-left,
/// y increasing downward. Area is (x1-x0)*(y1-y0) exactly.
struct PixelBBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool valid() const { return x0 < x1 && y0 < y1; }
};

/// Axis-aligned geographic box in degrees.
struct GeoBBox {
    double lon_min = 0.0, lat_min = 0.0, lon_max = 0.0, lat_max = 0.0;

    double area() const { return (lon_max - lon_min) * (lat_max - lat_min); }
    bool valid() const { return lon_min < lon_max && lat_min < lat_max; }
};

/// Detection classes. File formats carry only ids 0..2; Platform is the
/// merged pseudo-class used during evaluation only.
enum class ObjectClass : int {
    SinglePlatform = 0,
    PlatformCluster = 1,
    WindTurbine = 2,
    Platform = 3,
};

const char* class_name(ObjectClass c);
int class_id(ObjectClass c);
ObjectClass class_from_id(int id);  // accepts 0..2 only

/// Merge single platforms and platform clusters into the unified platform
/// class; wind turbines pass through. Idempotent.
ObjectClass merge_class(ObjectClass c);

/// One annotation: box center/size normalized to [0,1] in chip coordinates.
struct Label {
    ObjectClass cls = ObjectClass::SinglePlatform;
    double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;

    PixelBBox box_px(int chip_width, int chip_height) const;
    static Label from_box(ObjectClass cls, const PixelBBox& box, int chip_width, int chip_height);
};

/// One detector output, pixel box in chip-local coordinates.
struct Detection {
    std::uint64_t id = 0;
    std::string chip_id;
    ObjectClass cls = ObjectClass::SinglePlatform;
    double confidence = 0.0;
    PixelBBox box_px;
    std::optional<GeoBBox> box_geo;
};

/// Intersection-over-union of two valid boxes; 0 when disjoint, symmetric.
double iou(const PixelBBox& a, const PixelBBox& b);
double iou(const GeoBBox& a, const GeoBBox& b);

/// Map a pixel box through an affine geotransform; returns the axis-aligned
/// hull of the four mapped corners. Throws "singular geotransform" when the
/// transform is degenerate.
GeoBBox geolocate(const PixelBBox& box, const GeoTransform& gt);

}  // namespace opdet
