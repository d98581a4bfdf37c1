#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/synthgen/scene.hpp"

namespace opdet::synthgen {

/// Class balancing bookkeeping: how many synthetic samples each class needs
/// to reach its target on top of the real ones.
struct GenerationManifest {
    std::array<int, 3> real{0, 0, 0};
    std::array<int, 3> target{0, 0, 0};
    std::array<int, 3> synthetic{0, 0, 0};
    std::uint64_t seed = 0;

    int total_synthetic() const { return synthetic[0] + synthetic[1] + synthetic[2]; }
};

/// synthetic[c] = max(0, target[c] - real[c]).
GenerationManifest balance_manifest(const std::array<int, 3>& real_counts,
                                    const std::array<int, 3>& targets, std::uint64_t seed = 0);

/// Manifest JSON: {"classes":[{"class_id","real","target","synthetic"}],
/// "seed"}. Loading recomputes/validates the synthetic column.
GenerationManifest read_manifest(const std::string& path);
void write_manifest(const GenerationManifest& manifest, const std::string& path);

/// Generator knobs with defaults matching the observed scale of platform
/// signatures (a 120x70 m platform reads roughly 290x230 m, ~23-29 px at
/// 10 m/px).
struct SynthParams {
    int anchor_spacing_px = 96;
    int objects_per_scene_min = 1;
    int objects_per_scene_max = 5;
    int retry_budget = 20;            // anchors tried per object before skipping the scene
    int screen_reject_threshold = 120;
    ClusterParams cluster;
    std::pair<int, int> platform_kernel_px{9, 31};  // also used for cluster points
    std::pair<int, int> turbine_kernel_px{5, 15};
};

/// A screened background ready for object insertion.
struct Background {
    Raster8 raster;
    EntityMap entities;
};

/// Observer hook for the invariant suites: fired once per placed object with
/// the raster before and after stamping.
struct PlacementEvent {
    int scene_index;
    const SynthObject& object;
    const Label& label;
    const Raster8& before;
    const Raster8& after;
    const EntityMap& entities;
};
using PlacementObserver = std::function<void(const PlacementEvent&)>;

/// Files written for one generated scene.
struct SceneOutput {
    std::string image_path;
    std::string label_path;
    int n_objects = 0;
};

/// Generates image-label pairs until every class reaches its manifest count.
/// Scenes draw 1-5 objects each, backgrounds must pass screening, and each
/// scene derives its RNG stream from (manifest.seed, scene index) so reruns
/// are byte-identical. Writes "synth_{index:06}.pgm" / ".txt" under out_dir.
std::vector<SceneOutput> generate_dataset(const GenerationManifest& manifest,
                                          const std::vector<Background>& backgrounds,
                                          const PipelineConfig& cfg, const SynthParams& params,
                                          const std::string& out_dir,
                                          const PlacementObserver& observer = {});

}  // namespace opdet::synthgen
