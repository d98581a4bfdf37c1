#pragma once

#include <string>
#include <vector>

#include "opdet/core/types.hpp"

namespace opdet::postprocess {

/// RFC 7946 FeatureCollection: one Polygon feature per detection (closed
/// counterclockwise 5-point ring of the geographic box, lon-lat order) with
/// properties {id, class_id, class_name, confidence, chip_id}. Throws when a
/// detection lacks geolocation.
std::string export_geojson(const std::vector<Detection>& dets);
void write_geojson(const std::vector<Detection>& dets, const std::string& path);

/// Reads detections back from a FeatureCollection produced by export_geojson
/// (box_geo is set from the ring's hull; box_px is left empty).
std::vector<Detection> read_geojson(const std::string& path);

}  // namespace opdet::postprocess
