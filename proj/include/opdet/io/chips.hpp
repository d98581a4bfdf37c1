#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opdet/core/types.hpp"

namespace opdet::io {

/// A chip raster plus the metadata carried by its JSON sidecar.
struct ChipRecord {
    std::string chip_id;
    std::string tile_id;
    std::pair<int, int> offset_px{0, 0};
    GeoTransform geotransform;
    Raster8 raster;
};

/// Sidecar "{chip_id}.json": {chip_id, tile_id, offset_px, geotransform, crs}.
void write_chip_sidecar(const ChipRecord& chip, const std::string& path);
ChipRecord read_chip_sidecar(const std::string& path);  // raster left empty

/// Writes "{chip_id}.pgm" + "{chip_id}.json" into `dir`.
void write_chip(const ChipRecord& chip, const std::string& dir);

/// In-memory chip lookup used by postprocessing. Lookup failures throw
/// "unknown chip: <id>".
class ChipStore {
public:
    void add(ChipRecord chip);
    const ChipRecord& at(const std::string& chip_id) const;
    bool contains(const std::string& chip_id) const { return chips_.count(chip_id) > 0; }
    std::size_t size() const { return chips_.size(); }
    const std::map<std::string, ChipRecord>& all() const { return chips_; }

    /// Loads every "*.json" sidecar (and its PGM) from a directory.
    static ChipStore load_dir(const std::string& dir);

private:
    std::map<std::string, ChipRecord> chips_;
};

}  // namespace opdet::io
