#include "opdet/io/chips.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "opdet/io/raster_io.hpp"

namespace fs = std::filesystem;

namespace opdet::io {

void write_chip_sidecar(const ChipRecord& chip, const std::string& path) {
    nlohmann::json j{
        {"chip_id", chip.chip_id},
        {"tile_id", chip.tile_id},
        {"offset_px", {chip.offset_px.first, chip.offset_px.second}},
        {"geotransform", {chip.geotransform.a, chip.geotransform.b, chip.geotransform.c,
                          chip.geotransform.d, chip.geotransform.e, chip.geotransform.f}},
        {"crs", GeoTransform::kCrs},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

ChipRecord read_chip_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    ChipRecord c;
    c.chip_id = j.at("chip_id").get<std::string>();
    c.tile_id = j.value("tile_id", std::string{});
    if (j.contains("offset_px")) {
        c.offset_px = {j["offset_px"][0].get<int>(), j["offset_px"][1].get<int>()};
    }
    const auto& g = j.at("geotransform");
    if (g.size() != 6) throw std::runtime_error("geotransform must have 6 coefficients: " + path);
    c.geotransform = {g[0].get<double>(), g[1].get<double>(), g[2].get<double>(),
                      g[3].get<double>(), g[4].get<double>(), g[5].get<double>()};
    return c;
}

void write_chip(const ChipRecord& chip, const std::string& dir) {
    fs::create_directories(dir);
    write_pgm(chip.raster, (fs::path(dir) / (chip.chip_id + ".pgm")).string());
    write_chip_sidecar(chip, (fs::path(dir) / (chip.chip_id + ".json")).string());
}

void ChipStore::add(ChipRecord chip) {
    const std::string id = chip.chip_id;
    chips_[id] = std::move(chip);
}

const ChipRecord& ChipStore::at(const std::string& chip_id) const {
    auto it = chips_.find(chip_id);
    if (it == chips_.end()) throw std::runtime_error("unknown chip: " + chip_id);
    return it->second;
}

ChipStore ChipStore::load_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    ChipStore store;
    std::vector<fs::path> sidecars;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") sidecars.push_back(entry.path());
    }
    std::sort(sidecars.begin(), sidecars.end());
    for (const auto& p : sidecars) {
        ChipRecord c = read_chip_sidecar(p.string());
        fs::path pgm = p;
        pgm.replace_extension(".pgm");
        if (!fs::exists(pgm)) throw std::runtime_error("missing chip raster: " + pgm.string());
        c.raster = read_pgm(pgm.string());
        store.add(std::move(c));
    }
    return store;
}

}  // namespace opdet::io
