#pragma once

#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"
#include "opdet/io/chips.hpp"

namespace opdet::postprocess {

/// Detections transitively connected by geographic IoU >= dedup_iou
/// (a connected component, not a clique).
struct DetectionGroup {
    std::vector<Detection> members;
    std::size_t representative = 0;
};

/// Keep detections with confidence >= cfg.conf_threshold; order preserved.
std::vector<Detection> filter_confidence(const std::vector<Detection>& dets,
                                         const PipelineConfig& cfg);

/// Noise filter: keep a detection only if some pixel of its (clipped,
/// rasterized) box reaches cfg.dark_pixel_threshold. A pixel counts as
/// inside when its center lies in the clipped box. Throws "unknown chip".
std::vector<Detection> filter_dark(const std::vector<Detection>& dets, const io::ChipStore& chips,
                                   const PipelineConfig& cfg);

/// Fill box_geo for every detection from its chip's geotransform.
std::vector<Detection> geolocate_all(const std::vector<Detection>& dets,
                                     const io::ChipStore& chips);

/// Connected components under geographic IoU >= cfg.dedup_iou. Every
/// detection lands in exactly one group; representatives are preselected.
/// Throws "ungeolocated detection" when box_geo is missing.
std::vector<DetectionGroup> group_overlaps(const std::vector<Detection>& dets,
                                           const PipelineConfig& cfg);

/// Class consensus: the strict-majority class's best-confidence member, or
/// the overall best-confidence member when no majority exists. Confidence
/// ties break toward the smaller id.
const Detection& select_representative(const DetectionGroup& group);

/// Full stage: assign ids (by chip_id/box order, making the pipeline
/// order-independent), confidence filter, dark filter, geolocate, group,
/// and keep one representative per group.
std::vector<Detection> postprocess_run(std::vector<Detection> dets, const io::ChipStore& chips,
                                       const PipelineConfig& cfg);

}  // namespace opdet::postprocess
