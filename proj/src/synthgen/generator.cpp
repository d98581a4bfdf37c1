#include "opdet/synthgen/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "opdet/io/raster_io.hpp"
#include "opdet/io/records.hpp"

namespace fs = std::filesystem;

namespace opdet::synthgen {

GenerationManifest balance_manifest(const std::array<int, 3>& real_counts,
                                    const std::array<int, 3>& targets, std::uint64_t seed) {
    for (int i = 0; i < 3; ++i) {
        if (real_counts[i] < 0 || targets[i] < 0)
            throw std::invalid_argument("manifest counts must be >= 0");
    }
    GenerationManifest m;
    m.real = real_counts;
    m.target = targets;
    m.seed = seed;
    for (int i = 0; i < 3; ++i) m.synthetic[i] = std::max(0, m.target[i] - m.real[i]);
    return m;
}

GenerationManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    std::array<int, 3> real{0, 0, 0};
    std::array<int, 3> target{0, 0, 0};
    for (const auto& c : j.at("classes")) {
        const int id = c.at("class_id").get<int>();
        if (id < 0 || id > 2) throw std::runtime_error("manifest class_id out of range");
        real[id] = c.at("real").get<int>();
        target[id] = c.at("target").get<int>();
        if (c.contains("synthetic")) {
            const int synth = c.at("synthetic").get<int>();
            if (synth != std::max(0, target[id] - real[id]))
                throw std::runtime_error("manifest synthetic count inconsistent for class " +
                                         std::to_string(id));
        }
    }
    return balance_manifest(real, target, j.value("seed", std::uint64_t{0}));
}

void write_manifest(const GenerationManifest& manifest, const std::string& path) {
    nlohmann::json classes = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) {
        classes.push_back({{"class_id", i},
                           {"real", manifest.real[i]},
                           {"target", manifest.target[i]},
                           {"synthetic", manifest.synthetic[i]}});
    }
    nlohmann::json j{{"classes", classes}, {"seed", manifest.seed}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

namespace {

int odd_in_range(Rng& rng, std::pair<int, int> range) {
    const int lo = range.first | 1;
    const int hi = range.second % 2 == 0 ? range.second - 1 : range.second;
    const int steps = (hi - lo) / 2;
    return lo + 2 * rng.uniform_int(0, steps);
}

KernelSpec random_kernel(Rng& rng, ObjectClass cls, const SynthParams& params,
                         const PipelineConfig& cfg) {
    const auto range = cls == ObjectClass::WindTurbine ? params.turbine_kernel_px
                                                       : params.platform_kernel_px;
    const int size = odd_in_range(rng, range);
    KernelSpec spec;
    spec.size = {size, size};
    spec.orientation_deg = rng.uniform(0.0, 180.0);
    // peaks stay above both the configured and the default dark threshold
    spec.peak = rng.uniform(std::max(150.0, static_cast<double>(cfg.dark_pixel_threshold)), 255.0);
    const double major = rng.uniform(size / 6.0, size / 3.5);
    spec.sigma = {major, major * rng.uniform(0.45, 1.0)};
    return spec;
}

bool boxes_intersect(const PixelBBox& a, const PixelBBox& b) {
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

}  // namespace

std::vector<SceneOutput> generate_dataset(const GenerationManifest& manifest,
                                          const std::vector<Background>& backgrounds,
                                          const PipelineConfig& cfg, const SynthParams& params,
                                          const std::string& out_dir,
                                          const PlacementObserver& observer) {
    std::array<int, 3> remaining = manifest.synthetic;
    int total = remaining[0] + remaining[1] + remaining[2];
    std::vector<SceneOutput> outputs;
    if (total == 0) return outputs;

    std::vector<const Background*> accepted;
    for (const auto& bg : backgrounds) {
        if (bg.raster.width != bg.entities.width || bg.raster.height != bg.entities.height)
            throw std::runtime_error("shape mismatch");
        if (screen_background(bg.raster, bg.entities, params.screen_reject_threshold))
            accepted.push_back(&bg);
    }
    if (accepted.empty()) throw std::runtime_error("no accepted backgrounds");

    fs::create_directories(out_dir);

    const long attempt_cap = 1000L + 20L * total;
    long attempt = 0;
    int written = 0;
    while (total > 0) {
        if (attempt >= attempt_cap)
            throw std::runtime_error("generation stalled: placement keeps failing");
        Rng rng(derive_seed(manifest.seed, static_cast<std::uint64_t>(attempt)));
        ++attempt;

        const Background& bg = *accepted[rng.index(accepted.size())];
        SynthScene scene;
        scene.background = bg.raster;
        scene.entities = bg.entities;

        AnchorGrid grid = make_anchor_grid(scene.entities, params.anchor_spacing_px, rng, manifest.seed);
        if (grid.points.empty()) continue;
        rng.shuffle(grid.points);
        std::size_t next_anchor = 0;

        int want = rng.uniform_int(params.objects_per_scene_min, params.objects_per_scene_max);
        want = std::min(want, total);

        std::vector<PixelBBox> taken;
        for (int k = 0; k < want; ++k) {
            std::vector<ObjectClass> options;
            for (int c = 0; c < 3; ++c) {
                if (remaining[c] > 0) options.push_back(static_cast<ObjectClass>(c));
            }
            if (options.empty()) break;
            const ObjectClass cls = options[rng.index(options.size())];

            const ClusterGeometry geometry = cls == ObjectClass::PlatformCluster
                                                 ? gen_cluster_geometry(params.cluster, rng)
                                                 : gen_point_geometry(cls);
            std::vector<KernelSpec> kernels;
            kernels.reserve(geometry.points.size());
            for (std::size_t i = 0; i < geometry.points.size(); ++i)
                kernels.push_back(random_kernel(rng, cls, params, cfg));
            const double rotation = rng.uniform(0.0, 360.0);

            bool placed = false;
            for (int t = 0; t < params.retry_budget && next_anchor < grid.points.size(); ++t) {
                const auto anchor = grid.points[next_anchor++];
                PixelBBox box;
                try {
                    box = placement_box(geometry, anchor, rotation, kernels);
                } catch (const std::exception&) {
                    continue;
                }
                if (box.x0 < 0.0 || box.y0 < 0.0 || box.x1 > scene.background.width ||
                    box.y1 > scene.background.height)
                    continue;
                bool overlaps = false;
                for (const auto& other : taken) {
                    if (boxes_intersect(box, other)) {
                        overlaps = true;
                        break;
                    }
                }
                if (overlaps) continue;
                Raster8 before;
                if (observer) before = scene.background;
                try {
                    place_object(scene, cls, geometry, anchor, rotation, kernels);
                } catch (const std::exception&) {
                    continue;
                }
                taken.push_back(box);
                --remaining[class_id(cls)];
                --total;
                placed = true;
                if (observer) {
                    observer(PlacementEvent{written, scene.objects.back(), scene.labels.back(),
                                            before, scene.background, scene.entities});
                }
                break;
            }
            if (!placed) break;  // retry budget exhausted: skip the rest of this scene
        }

        if (scene.labels.empty()) continue;
        char stem[32];
        std::snprintf(stem, sizeof(stem), "synth_%06d", written);
        SceneOutput out;
        out.image_path = (fs::path(out_dir) / (std::string(stem) + ".pgm")).string();
        out.label_path = (fs::path(out_dir) / (std::string(stem) + ".txt")).string();
        out.n_objects = static_cast<int>(scene.labels.size());
        io::write_pgm(scene.background, out.image_path);
        io::write_labels(scene.labels, out.label_path);
        outputs.push_back(std::move(out));
        ++written;
    }
    return outputs;
}

}  // namespace opdet::synthgen
