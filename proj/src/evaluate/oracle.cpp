#include "opdet/evaluate/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "opdet/core/rng.hpp"
#include "opdet/io/raster_io.hpp"
#include "opdet/io/records.hpp"

namespace fs = std::filesystem;

namespace opdet::evaluate {

namespace {

bool box_is_dark(const Raster8& raster, int x0, int y0, int x1, int y1, int threshold) {
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (raster.at(x, y) >= threshold) return false;
        }
    }
    return true;
}

PixelBBox jitter_box(const PixelBBox& box, double sigma, int w, int h, Rng& rng) {
    PixelBBox out{box.x0 + rng.normal(0.0, sigma), box.y0 + rng.normal(0.0, sigma),
                  box.x1 + rng.normal(0.0, sigma), box.y1 + rng.normal(0.0, sigma)};
    out.x0 = std::clamp(out.x0, 0.0, static_cast<double>(w));
    out.y0 = std::clamp(out.y0, 0.0, static_cast<double>(h));
    out.x1 = std::clamp(out.x1, 0.0, static_cast<double>(w));
    out.y1 = std::clamp(out.y1, 0.0, static_cast<double>(h));
    if (out.x1 <= out.x0) out.x1 = std::min(static_cast<double>(w), out.x0 + 1e-3);
    if (out.y1 <= out.y0) out.y1 = std::min(static_cast<double>(h), out.y0 + 1e-3);
    if (out.x1 <= out.x0) out.x0 = out.x1 - 1e-3;
    if (out.y1 <= out.y0) out.y0 = out.y1 - 1e-3;
    return out;
}

}  // namespace

std::vector<Detection> oracle_detect(const std::vector<ChipLabels>& chips,
                                     const OracleParams& params, const PipelineConfig& cfg) {
    if (params.dropout_rate < 0.0 || params.dropout_rate > 1.0 || params.spurious_rate < 0.0 ||
        params.spurious_rate > 1.0)
        throw std::invalid_argument("oracle rates must be in [0,1]");
    if (params.jitter_sigma_px < 0.0) throw std::invalid_argument("jitter must be >= 0");

    std::vector<Detection> dets;
    long labels_seen = 0;
    long spurious_emitted = 0;
    for (std::size_t ci = 0; ci < chips.size(); ++ci) {
        const ChipLabels& chip = chips[ci];
        if (!chip.raster) throw std::invalid_argument("chip raster required");
        const int w = chip.raster->width;
        const int h = chip.raster->height;
        Rng rng(derive_seed(params.seed, ci));

        for (const auto& label : chip.labels) {
            ++labels_seen;
            if (rng.bernoulli(params.dropout_rate)) continue;
            Detection d;
            d.chip_id = chip.chip_id;
            d.cls = label.cls;
            d.box_px = jitter_box(label.box_px(w, h), params.jitter_sigma_px, w, h, rng);
            d.confidence = rng.uniform(0.6, 1.0);
            dets.push_back(std::move(d));
        }

        // cumulative rounding keeps the global spurious count at
        // round(rate * total labels) without per-chip truncation loss
        const long spurious_due =
            static_cast<long>(std::floor(params.spurious_rate * labels_seen + 0.5));
        for (; spurious_emitted < spurious_due; ++spurious_emitted) {
            for (int attempt = 0; attempt < 50; ++attempt) {
                const int bw = rng.uniform_int(10, 30);
                const int bh = rng.uniform_int(10, 30);
                if (bw >= w || bh >= h) break;
                const int x0 = rng.uniform_int(0, w - bw);
                const int y0 = rng.uniform_int(0, h - bh);
                if (!box_is_dark(*chip.raster, x0, y0, x0 + bw, y0 + bh,
                                 cfg.dark_pixel_threshold))
                    continue;
                Detection d;
                d.chip_id = chip.chip_id;
                d.cls = static_cast<ObjectClass>(rng.uniform_int(0, 2));
                d.box_px = {static_cast<double>(x0), static_cast<double>(y0),
                            static_cast<double>(x0 + bw), static_cast<double>(y0 + bh)};
                d.confidence = rng.uniform(0.5, 0.8);
                dets.push_back(std::move(d));
                break;
            }
        }
    }
    return dets;
}

void oracle_detect_dir(const std::string& labels_dir, const OracleParams& params,
                       const PipelineConfig& cfg, const std::string& out_path) {
    if (!fs::is_directory(labels_dir)) throw std::runtime_error("not a directory: " + labels_dir);
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(labels_dir)) {
        if (entry.path().extension() == ".txt") stems.push_back(entry.path().stem().string());
    }
    std::sort(stems.begin(), stems.end());

    std::vector<Raster8> rasters;
    rasters.reserve(stems.size());
    std::vector<ChipLabels> chips;
    chips.reserve(stems.size());
    for (const auto& stem : stems) {
        const fs::path pgm = fs::path(labels_dir) / (stem + ".pgm");
        if (!fs::exists(pgm)) throw std::runtime_error("missing chip raster: " + pgm.string());
        rasters.push_back(io::read_pgm(pgm.string()));
        ChipLabels cl;
        cl.chip_id = stem;
        cl.labels = io::read_labels((fs::path(labels_dir) / (stem + ".txt")).string());
        chips.push_back(std::move(cl));
    }
    for (std::size_t i = 0; i < chips.size(); ++i) chips[i].raster = &rasters[i];

    io::write_detections_jsonl(oracle_detect(chips, params, cfg), out_path);
}

}  // namespace opdet::evaluate
