#include "opdet/evaluate/evaluate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opdet::evaluate {

Metrics Metrics::from_counts(int tp, int fp, int fn) {
    Metrics m;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    return m;
}

namespace {

struct Box4 {
    double x0, y0, x1, y1;
};

double box_iou(const Box4& a, const Box4& b) {
    const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / ((a.x1 - a.x0) * (a.y1 - a.y0) + (b.x1 - b.x0) * (b.y1 - b.y0) - inter);
}

std::vector<ObjectClass> active_classes(bool merged) {
    if (merged) return {ObjectClass::Platform, ObjectClass::WindTurbine};
    return {ObjectClass::SinglePlatform, ObjectClass::PlatformCluster, ObjectClass::WindTurbine};
}

std::size_t class_slot(const std::vector<ObjectClass>& classes, ObjectClass c) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] == c) return i;
    }
    throw std::logic_error("class not in active set");
}

void tally_from_confusion(MatchReport& report) {
    const std::size_t n = report.classes.size();
    report.tally.clear();
    for (std::size_t c = 0; c < n; ++c) {
        ClassTally t;
        t.cls = report.classes[c];
        t.tp = report.confusion[c][c];
        for (std::size_t j = 0; j <= n; ++j) t.gt += report.confusion[c][j];
        t.fn = t.gt - t.tp;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i != c) t.fp += report.confusion[i][c];
        }
        report.tally.push_back(t);
    }
}

}  // namespace

MatchReport match_detections(const std::vector<Detection>& preds,
                             const std::vector<io::GroundTruth>& gts, const PipelineConfig& cfg,
                             bool merged) {
    // everything must share one coordinate frame
    io::Frame frame = io::Frame::Geo;
    if (!gts.empty()) {
        frame = gts.front().frame;
        for (const auto& g : gts) {
            if (g.frame != frame) throw std::runtime_error("mixed evaluation frames");
        }
    } else if (!preds.empty()) {
        frame = preds.front().box_geo ? io::Frame::Geo : io::Frame::Pixel;
    }

    std::vector<Box4> pred_boxes;
    pred_boxes.reserve(preds.size());
    for (const auto& p : preds) {
        if (frame == io::Frame::Geo) {
            if (!p.box_geo)
                throw std::runtime_error("mixed evaluation frames: prediction lacks geolocation");
            pred_boxes.push_back({p.box_geo->lon_min, p.box_geo->lat_min, p.box_geo->lon_max,
                                  p.box_geo->lat_max});
        } else {
            pred_boxes.push_back({p.box_px.x0, p.box_px.y0, p.box_px.x1, p.box_px.y1});
        }
    }
    std::vector<Box4> gt_boxes;
    gt_boxes.reserve(gts.size());
    for (const auto& g : gts) gt_boxes.push_back({g.x0, g.y0, g.x1, g.y1});

    // greedy spatial assignment, confidence-descending
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (preds[a].confidence != preds[b].confidence)
            return preds[a].confidence > preds[b].confidence;
        return preds[a].id < preds[b].id;
    });

    MatchReport report;
    report.merged = merged;
    report.classes = active_classes(merged);
    const std::size_t n = report.classes.size();
    report.confusion.assign(n + 1, std::vector<int>(n + 1, 0));

    std::vector<bool> gt_taken(gts.size(), false);
    std::vector<int> pred_match(preds.size(), -1);
    for (std::size_t pi : order) {
        double best_iou = 0.0;
        int best_gt = -1;
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_taken[gi]) continue;
            const double v = box_iou(pred_boxes[pi], gt_boxes[gi]);
            if (v >= cfg.eval_iou && v > best_iou) {
                best_iou = v;
                best_gt = static_cast<int>(gi);
            }
        }
        if (best_gt >= 0) {
            gt_taken[best_gt] = true;
            pred_match[pi] = best_gt;
            report.matches.push_back({preds[pi].id, static_cast<std::size_t>(best_gt), best_iou});
        }
    }

    auto slot = [&](ObjectClass c) {
        return class_slot(report.classes, merged ? merge_class(c) : c);
    };
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        const std::size_t pc = slot(preds[pi].cls);
        if (pred_match[pi] >= 0) {
            const std::size_t gc = slot(gts[static_cast<std::size_t>(pred_match[pi])].cls);
            ++report.confusion[gc][pc];
        } else {
            ++report.confusion[n][pc];  // background FP
        }
    }
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
        if (!gt_taken[gi]) ++report.confusion[slot(gts[gi].cls)][n];  // background FN
    }

    tally_from_confusion(report);
    return report;
}

std::vector<Metrics> compute_metrics(const MatchReport& report) {
    std::vector<Metrics> out;
    out.reserve(report.tally.size());
    for (const auto& t : report.tally) out.push_back(Metrics::from_counts(t.tp, t.fp, t.fn));
    return out;
}

ClassTally micro_tally(const MatchReport& report) {
    ClassTally total;
    for (const auto& t : report.tally) {
        total.gt += t.gt;
        total.tp += t.tp;
        total.fp += t.fp;
        total.fn += t.fn;
    }
    return total;
}

ConfusionMatrix confusion_matrix(const MatchReport& report, bool merged) {
    if (report.merged && !merged)
        throw std::runtime_error("cannot derive per-class confusion from a merged report");

    std::vector<std::vector<int>> counts = report.confusion;
    std::vector<ObjectClass> classes = report.classes;
    if (!report.merged && merged) {
        // fold single platforms and clusters into the unified platform class
        classes = active_classes(true);
        const std::size_t n = report.classes.size();
        std::vector<std::vector<int>> folded(classes.size() + 1,
                                             std::vector<int>(classes.size() + 1, 0));
        auto fold_slot = [&](std::size_t raw_slot) -> std::size_t {
            if (raw_slot == n) return classes.size();  // background row/col
            return class_slot(classes, merge_class(report.classes[raw_slot]));
        };
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j <= n; ++j) {
                folded[fold_slot(i)][fold_slot(j)] += report.confusion[i][j];
            }
        }
        counts = std::move(folded);
    }

    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts = counts;
    const std::size_t n = classes.size();
    cm.row_percent.assign(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        long row_total = 0;
        for (std::size_t j = 0; j <= n; ++j) row_total += counts[i][j];
        if (row_total == 0) continue;
        for (std::size_t j = 0; j <= n; ++j) {
            cm.row_percent[i][j] = 100.0 * counts[i][j] / static_cast<double>(row_total);
        }
    }
    return cm;
}

EvalResult evaluate_run(const std::vector<Detection>& preds,
                        const std::vector<io::GroundTruth>& gts, const PipelineConfig& cfg,
                        bool merge) {
    EvalResult result;
    result.report = match_detections(preds, gts, cfg, merge);
    result.metrics = compute_metrics(result.report);
    result.confusion = confusion_matrix(result.report, merge);
    return result;
}

}  // namespace opdet::evaluate
