#include "opdet/postprocess/geojson.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opdet::postprocess {

std::string export_geojson(const std::vector<Detection>& dets) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& d : dets) {
        if (!d.box_geo) throw std::runtime_error("ungeolocated detection");
        const GeoBBox& g = *d.box_geo;
        nlohmann::json ring = nlohmann::json::array({
            {g.lon_min, g.lat_min},
            {g.lon_max, g.lat_min},
            {g.lon_max, g.lat_max},
            {g.lon_min, g.lat_max},
            {g.lon_min, g.lat_min},
        });
        features.push_back({
            {"type", "Feature"},
            {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}},
            {"properties",
             {{"id", d.id},
              {"class_id", class_id(d.cls)},
              {"class_name", class_name(d.cls)},
              {"confidence", d.confidence},
              {"chip_id", d.chip_id}}},
        });
    }
    nlohmann::json fc{{"type", "FeatureCollection"}, {"features", features}};
    return fc.dump(2) + "\n";
}

void write_geojson(const std::vector<Detection>& dets, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << export_geojson(dets);
}

std::vector<Detection> read_geojson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json fc;
    in >> fc;
    if (fc.value("type", std::string{}) != "FeatureCollection")
        throw std::runtime_error("not a FeatureCollection: " + path);

    std::vector<Detection> dets;
    for (const auto& feature : fc.at("features")) {
        const auto& geom = feature.at("geometry");
        if (geom.value("type", std::string{}) != "Polygon")
            throw std::runtime_error("feature geometry must be a Polygon: " + path);
        const auto& ring = geom.at("coordinates").at(0);
        if (ring.size() < 4) throw std::runtime_error("degenerate polygon ring: " + path);
        GeoBBox g{1e300, 1e300, -1e300, -1e300};
        for (const auto& pt : ring) {
            const double lon = pt.at(0).get<double>();
            const double lat = pt.at(1).get<double>();
            g.lon_min = std::min(g.lon_min, lon);
            g.lon_max = std::max(g.lon_max, lon);
            g.lat_min = std::min(g.lat_min, lat);
            g.lat_max = std::max(g.lat_max, lat);
        }
        Detection d;
        const auto& props = feature.at("properties");
        d.id = props.value("id", std::uint64_t{0});
        d.cls = class_from_id(props.at("class_id").get<int>());
        d.confidence = props.value("confidence", 0.0);
        d.chip_id = props.value("chip_id", std::string{});
        d.box_geo = g;
        dets.push_back(std::move(d));
    }
    return dets;
}

}  // namespace opdet::postprocess
