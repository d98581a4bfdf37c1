#pragma once

#include <string>

#include "opdet/core/types.hpp"

namespace opdet::io {

/// Binary PGM ("P5", maxval 255), the chip raster format.
void write_pgm(const Raster8& raster, const std::string& path);
Raster8 read_pgm(const std::string& path);

/// Grayscale PFM ("Pf", float32, negative scale = little endian, rows
/// bottom-up), the dB raster format. NaN pixels carry nodata.
void write_pfm(const RasterF& raster, const std::string& path);
RasterF read_pfm(const std::string& path);

}  // namespace opdet::io
