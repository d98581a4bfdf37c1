#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"

namespace opdet::evaluate {

/// Noise model of the stand-in detector: each label survives with
/// probability 1-dropout and gets Gaussian corner jitter; spurious boxes are
/// sampled on dark sea so the dark-pixel filter can remove them.
struct OracleParams {
    double jitter_sigma_px = 0.0;
    double dropout_rate = 0.0;
    double spurious_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Labels of one chip plus its raster (needed to find dark spots).
struct ChipLabels {
    std::string chip_id;
    std::vector<Label> labels;
    const Raster8* raster = nullptr;
};

/// Derives detections from ground-truth labels with controlled noise.
/// Kept labels carry confidence U[0.6,1.0]; spurious boxes U[0.5,0.8].
/// Deterministic for a given seed (per-chip streams).
std::vector<Detection> oracle_detect(const std::vector<ChipLabels>& chips,
                                     const OracleParams& params, const PipelineConfig& cfg);

/// Directory form: reads "{stem}.pgm" + "{stem}.txt" pairs (stem = chip id),
/// runs the oracle, writes detection JSON-Lines to out_path.
void oracle_detect_dir(const std::string& labels_dir, const OracleParams& params,
                       const PipelineConfig& cfg, const std::string& out_path);

}  // namespace opdet::evaluate
