#include "opdet/postprocess/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace opdet::postprocess {

std::vector<Detection> filter_confidence(const std::vector<Detection>& dets,
                                         const PipelineConfig& cfg) {
    std::vector<Detection> kept;
    kept.reserve(dets.size());
    for (const auto& d : dets) {
        if (d.confidence >= cfg.conf_threshold) kept.push_back(d);
    }
    return kept;
}

namespace {

bool box_has_bright_pixel(const PixelBBox& box, const Raster8& raster, int threshold) {
    // clip to the chip, then visit pixels whose centers fall inside
    const double x0 = std::max(box.x0, 0.0);
    const double y0 = std::max(box.y0, 0.0);
    const double x1 = std::min(box.x1, static_cast<double>(raster.width));
    const double y1 = std::min(box.y1, static_cast<double>(raster.height));
    if (!(x0 < x1 && y0 < y1)) return false;
    const int ix0 = std::max(0, static_cast<int>(std::ceil(x0 - 0.5)));
    const int iy0 = std::max(0, static_cast<int>(std::ceil(y0 - 0.5)));
    const int ix1 = std::min(raster.width - 1, static_cast<int>(std::ceil(x1 - 0.5)) - 1);
    const int iy1 = std::min(raster.height - 1, static_cast<int>(std::ceil(y1 - 0.5)) - 1);
    for (int y = iy0; y <= iy1; ++y) {
        for (int x = ix0; x <= ix1; ++x) {
            if (raster.at(x, y) >= threshold) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<Detection> filter_dark(const std::vector<Detection>& dets, const io::ChipStore& chips,
                                   const PipelineConfig& cfg) {
    std::vector<Detection> kept;
    kept.reserve(dets.size());
    for (const auto& d : dets) {
        const io::ChipRecord& chip = chips.at(d.chip_id);
        if (box_has_bright_pixel(d.box_px, chip.raster, cfg.dark_pixel_threshold)) kept.push_back(d);
    }
    return kept;
}

std::vector<Detection> geolocate_all(const std::vector<Detection>& dets,
                                     const io::ChipStore& chips) {
    std::vector<Detection> out = dets;
    for (auto& d : out) d.box_geo = geolocate(d.box_px, chips.at(d.chip_id).geotransform);
    return out;
}

std::vector<DetectionGroup> group_overlaps(const std::vector<Detection>& dets,
                                           const PipelineConfig& cfg) {
    const std::size_t n = dets.size();
    for (const auto& d : dets) {
        if (!d.box_geo) throw std::runtime_error("ungeolocated detection");
    }

    // breadth-first component traversal over the overlap graph
    std::vector<int> component(n, -1);
    std::vector<std::vector<std::size_t>> members_of;
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (component[i] >= 0) continue;
        const int comp = static_cast<int>(members_of.size());
        members_of.emplace_back();
        component[i] = comp;
        queue.assign(1, i);
        while (!queue.empty()) {
            const std::size_t cur = queue.back();
            queue.pop_back();
            members_of[comp].push_back(cur);
            for (std::size_t j = 0; j < n; ++j) {
                if (component[j] >= 0) continue;
                if (iou(*dets[cur].box_geo, *dets[j].box_geo) >= cfg.dedup_iou) {
                    component[j] = comp;
                    queue.push_back(j);
                }
            }
        }
        std::sort(members_of[comp].begin(), members_of[comp].end(),
                  [&](std::size_t a, std::size_t b) { return dets[a].id < dets[b].id; });
    }

    std::vector<DetectionGroup> groups;
    groups.reserve(members_of.size());
    for (const auto& idx : members_of) {
        DetectionGroup g;
        g.members.reserve(idx.size());
        for (std::size_t i : idx) g.members.push_back(dets[i]);
        groups.push_back(std::move(g));
    }
    std::sort(groups.begin(), groups.end(), [](const DetectionGroup& a, const DetectionGroup& b) {
        return a.members.front().id < b.members.front().id;
    });
    for (auto& g : groups) {
        const Detection& rep = select_representative(g);
        for (std::size_t i = 0; i < g.members.size(); ++i) {
            if (g.members[i].id == rep.id) {
                g.representative = i;
                break;
            }
        }
    }
    return groups;
}

const Detection& select_representative(const DetectionGroup& group) {
    if (group.members.empty()) throw std::invalid_argument("empty detection group");

    std::array<std::size_t, 3> votes{0, 0, 0};
    for (const auto& d : group.members) ++votes[class_id(d.cls)];
    int majority = -1;
    for (int c = 0; c < 3; ++c) {
        if (2 * votes[c] > group.members.size()) majority = c;
    }

    const Detection* best = nullptr;
    for (const auto& d : group.members) {
        if (majority >= 0 && class_id(d.cls) != majority) continue;
        if (!best || d.confidence > best->confidence ||
            (d.confidence == best->confidence && d.id < best->id)) {
            best = &d;
        }
    }
    return *best;
}

std::vector<Detection> postprocess_run(std::vector<Detection> dets, const io::ChipStore& chips,
                                       const PipelineConfig& cfg) {
    // ids from (chip_id, box, class, confidence) order: the pipeline output
    // then does not depend on input ordering
    std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        const auto ka = std::tie(a.chip_id, a.box_px.x0, a.box_px.y0, a.box_px.x1, a.box_px.y1,
                                 a.cls, a.confidence);
        const auto kb = std::tie(b.chip_id, b.box_px.x0, b.box_px.y0, b.box_px.x1, b.box_px.y1,
                                 b.cls, b.confidence);
        return ka < kb;
    });
    for (std::size_t i = 0; i < dets.size(); ++i) dets[i].id = i;

    std::vector<Detection> cur = filter_confidence(dets, cfg);
    cur = filter_dark(cur, chips, cfg);
    cur = geolocate_all(cur, chips);
    const std::vector<DetectionGroup> groups = group_overlaps(cur, cfg);

    std::vector<Detection> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(select_representative(g));
    return out;
}

}  // namespace opdet::postprocess
