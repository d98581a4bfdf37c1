#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace opdet {

/// Every numeric threshold of the pipeline in one place. Defaults follow the
/// published operating point; any stage accepts an override file.
struct PipelineConfig {
    double db_lo = -40.0;             // quantization range low (dB)
    double db_hi = 0.0;               // quantization range high (dB)
    int chip_size = 640;              // detector input size (px)
    double chip_overlap = 0.2;        // chip overlap fraction
    double grid_step_m = 100000.0;    // tile grid step (m)
    double grid_tile_m = 110000.0;    // tile extent (m)
    double conf_threshold = 0.5;      // detection confidence cutoff
    int dark_pixel_threshold = 150;   // 8-bit noise filter level (~ -16.5 dB)
    double dedup_iou = 0.2;           // overlap-grouping IoU
    double eval_iou = 0.3;            // evaluation matching IoU
    double coast_buffer_m = 1000.0;   // land buffer defining the coast entity
    double pixel_size_m = 10.0;       // ground sampling distance

    void validate() const;

    /// Coast buffer expressed in pixels.
    double coast_buffer_px() const { return coast_buffer_m / pixel_size_m; }

    /// Defaults overlaid with any keys present in `j`.
    static PipelineConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Load overrides from a JSON file; empty path returns defaults.
    static PipelineConfig load(const std::string& path);
};

}  // namespace opdet
