#include "opdet/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdet {

RasterF RasterF::filled(int width, int height, float value) {
    RasterF r;
    r.width = width;
    r.height = height;
    r.values.assign(static_cast<std::size_t>(width) * height, value);
    return r;
}

bool RasterF::is_nodata(float v) const {
    if (std::isnan(v)) return true;  // NaN is never valid backscatter
    return nodata && v == *nodata;
}

void RasterF::validate() const {
    if (width < 1 || height < 1)
        throw std::invalid_argument("raster dimensions must be >= 1");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("raster value count does not match dimensions");
}

Raster8 Raster8::filled(int width, int height, std::uint8_t value) {
    Raster8 r;
    r.width = width;
    r.height = height;
    r.values.assign(static_cast<std::size_t>(width) * height, value);
    return r;
}

void Raster8::validate() const {
    if (width < 1 || height < 1)
        throw std::invalid_argument("raster dimensions must be >= 1");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("raster value count does not match dimensions");
}

GeoTransform GeoTransform::inverse() const {
    const double dt = det();
    if (dt == 0.0) throw std::runtime_error("singular geotransform");
    // col = (f*(lon-a) - c*(lat-d)) / det, row = (-e*(lon-a) + b*(lat-d)) / det
    return {(-f * a + c * d) / dt, f / dt, -c / dt,
            (e * a - b * d) / dt, -e / dt, b / dt};
}

const char* class_name(ObjectClass c) {
    switch (c) {
        case ObjectClass::SinglePlatform: return "single_platform";
        case ObjectClass::PlatformCluster: return "platform_cluster";
        case ObjectClass::WindTurbine: return "wind_turbine";
        case ObjectClass::Platform: return "platform";
    }
    throw std::invalid_argument("unknown object class");
}

int class_id(ObjectClass c) { return static_cast<int>(c); }

ObjectClass class_from_id(int id) {
    if (id < 0 || id > 2)
        throw std::runtime_error("class id out of range: " + std::to_string(id));
    return static_cast<ObjectClass>(id);
}

ObjectClass merge_class(ObjectClass c) {
    switch (c) {
        case ObjectClass::SinglePlatform:
        case ObjectClass::PlatformCluster:
        case ObjectClass::Platform:
            return ObjectClass::Platform;
        case ObjectClass::WindTurbine:
            return ObjectClass::WindTurbine;
    }
    throw std::invalid_argument("unknown object class");
}

PixelBBox Label::box_px(int chip_width, int chip_height) const {
    return {(cx - w / 2.0) * chip_width, (cy - h / 2.0) * chip_height,
            (cx + w / 2.0) * chip_width, (cy + h / 2.0) * chip_height};
}

Label Label::from_box(ObjectClass cls, const PixelBBox& box, int chip_width, int chip_height) {
    Label l;
    l.cls = cls;
    l.cx = 0.5 * (box.x0 + box.x1) / chip_width;
    l.cy = 0.5 * (box.y0 + box.y1) / chip_height;
    l.w = box.width() / chip_width;
    l.h = box.height() / chip_height;
    return l;
}

namespace {

double iou4(double ax0, double ay0, double ax1, double ay1,
            double bx0, double by0, double bx1, double by1) {
    const double iw = std::min(ax1, bx1) - std::max(ax0, bx0);
    const double ih = std::min(ay1, by1) - std::max(ay0, by0);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter;
    return inter / uni;
}

}  // namespace

double iou(const PixelBBox& a, const PixelBBox& b) {
    return iou4(a.x0, a.y0, a.x1, a.y1, b.x0, b.y0, b.x1, b.y1);
}

double iou(const GeoBBox& a, const GeoBBox& b) {
    return iou4(a.lon_min, a.lat_min, a.lon_max, a.lat_max,
                b.lon_min, b.lat_min, b.lon_max, b.lat_max);
}

GeoBBox geolocate(const PixelBBox& box, const GeoTransform& gt) {
    if (!gt.invertible()) throw std::runtime_error("singular geotransform");
    const std::pair<double, double> corners[4] = {
        gt.apply(box.x0, box.y0), gt.apply(box.x1, box.y0),
        gt.apply(box.x0, box.y1), gt.apply(box.x1, box.y1)};
    GeoBBox g{corners[0].first, corners[0].second, corners[0].first, corners[0].second};
    for (const auto& [lon, lat] : corners) {
        g.lon_min = std::min(g.lon_min, lon);
        g.lon_max = std::max(g.lon_max, lon);
        g.lat_min = std::min(g.lat_min, lat);
        g.lat_max = std::max(g.lat_max, lat);
    }
    return g;
}

}  // namespace opdet
