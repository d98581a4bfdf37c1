#pragma once

#include <string>
#include <vector>

#include "opdet/core/types.hpp"

namespace opdet::io {

/// Detection JSON-Lines, the external-detector contract. One object per
/// line: {"chip_id": str, "class_id": 0|1|2, "conf": float,
/// "bbox_px": [x0,y0,x1,y1]}. Ids are not serialized; the postprocessing
/// stage assigns them.
std::string detections_to_jsonl(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_jsonl(const std::string& text);
void write_detections_jsonl(const std::vector<Detection>& dets, const std::string& path);
std::vector<Detection> read_detections_jsonl(const std::string& path);

/// Coordinate frame of a ground-truth entry.
enum class Frame { Pixel, Geo };

/// One ground-truth object. The box is stored as raw (x0,y0,x1,y1) in the
/// declared frame.
struct GroundTruth {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    ObjectClass cls = ObjectClass::SinglePlatform;
    std::string region;
    Frame frame = Frame::Geo;
    std::string chip_id;
};

/// GT JSON-Lines: {"bbox": [x0,y0,x1,y1], "class_id": int, "region": str,
/// "frame": "geo"|"px", "chip_id": optional}.
std::vector<GroundTruth> read_ground_truth_jsonl(const std::string& path);
void write_ground_truth_jsonl(const std::vector<GroundTruth>& gts, const std::string& path);

/// Detection-label text files: one "class_id cx cy w h" line per object,
/// normalized values at 6 decimals.
std::string labels_to_text(const std::vector<Label>& labels);
std::vector<Label> labels_from_text(const std::string& text);
void write_labels(const std::vector<Label>& labels, const std::string& path);
std::vector<Label> read_labels(const std::string& path);

}  // namespace opdet::io
