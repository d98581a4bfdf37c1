#pragma once

#include <cstdint>
#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"
#include "opdet/io/records.hpp"

namespace opdet::evaluate {

struct MatchedPair {
    std::uint64_t pred_id = 0;
    std::size_t gt_index = 0;
    double iou = 0.0;
};

struct ClassTally {
    ObjectClass cls = ObjectClass::SinglePlatform;
    int gt = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

/// Matching outcome. `confusion` is (C+1)x(C+1): rows are GT classes plus a
/// background-FP row, columns are predicted classes plus a background-FN
/// column. TP+FN == GT and TP+FP == #predictions hold per class.
struct MatchReport {
    bool merged = false;
    std::vector<ObjectClass> classes;
    std::vector<ClassTally> tally;
    std::vector<MatchedPair> matches;
    std::vector<std::vector<int>> confusion;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    /// Zero-denominator terms evaluate to 0 (an all-FN class scores 0.00).
    static Metrics from_counts(int tp, int fp, int fn);
};

/// Greedy matching in descending confidence (ties by id): each prediction
/// takes the unmatched GT of highest IoU when that IoU >= cfg.eval_iou.
/// Matching is spatial first; class agreement only decides TP vs confusion
/// cross entry. merged=true maps both sides through merge_class before
/// tallying. Throws "mixed evaluation frames" on inconsistent coordinates.
MatchReport match_detections(const std::vector<Detection>& preds,
                             const std::vector<io::GroundTruth>& gts, const PipelineConfig& cfg,
                             bool merged = false);

/// Pr/Rc/F1 per class in report order.
std::vector<Metrics> compute_metrics(const MatchReport& report);

/// All-class pooled counts and their metrics.
ClassTally micro_tally(const MatchReport& report);

/// Counts plus row percentages (relative to each GT class total). The
/// background-FP row carries raw counts only.
struct ConfusionMatrix {
    std::vector<ObjectClass> classes;
    std::vector<std::vector<int>> counts;        // (C+1) x (C+1)
    std::vector<std::vector<double>> row_percent;  // C x (C+1)
};

/// Derive the (optionally merged) confusion matrix. A raw report can be
/// folded to the merged view; the reverse is impossible and throws.
ConfusionMatrix confusion_matrix(const MatchReport& report, bool merged);

struct EvalResult {
    MatchReport report;
    std::vector<Metrics> metrics;
    ConfusionMatrix confusion;
};

/// Match then score; merge=true applies the unified platform class to both
/// predictions and ground truth, so single/cluster confusions vanish.
EvalResult evaluate_run(const std::vector<Detection>& preds,
                        const std::vector<io::GroundTruth>& gts, const PipelineConfig& cfg,
                        bool merge);

}  // namespace opdet::evaluate
