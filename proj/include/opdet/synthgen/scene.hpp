#pragma once

#include <cstdint>
#include <vector>

#include "opdet/core/rng.hpp"
#include "opdet/core/types.hpp"
#include "opdet/synthgen/cluster.hpp"
#include "opdet/synthgen/entity_map.hpp"
#include "opdet/synthgen/kernel.hpp"

namespace opdet::synthgen {

/// Randomized candidate positions for object placement: one point per fully
/// sea spacing x spacing cell, jittered within the cell.
struct AnchorGrid {
    int spacing = 0;
    std::vector<std::pair<int, int>> points;
    std::uint64_t seed = 0;
};

/// Builds the per-scene anchor canvas. Cells only partially covered by sea
/// yield no candidate; jittered points falling off sea are dropped.
/// jitter_px < 0 selects the default of spacing/4.
AnchorGrid make_anchor_grid(const EntityMap& entities, int spacing, std::uint64_t seed,
                            double jitter_px = -1.0);
AnchorGrid make_anchor_grid(const EntityMap& entities, int spacing, Rng& rng,
                            std::uint64_t seed, double jitter_px = -1.0);

/// One synthetic object placed in a scene.
struct SynthObject {
    ObjectClass cls = ObjectClass::SinglePlatform;
    ClusterGeometry geometry;           // local coordinates
    std::pair<int, int> anchor{0, 0};   // scene pixels
    double rotation_deg = 0.0;
    std::vector<KernelSpec> kernels;    // one per geometry point
};

/// A background raster with its entity map, accumulated objects, and the
/// labels derived from them.
struct SynthScene {
    Raster8 background;
    EntityMap entities;
    std::vector<SynthObject> objects;
    std::vector<Label> labels;
};

/// Rotates the geometry about its origin, translates it to the anchor,
/// stamps each point's kernel into the background by per-pixel maximum, and
/// appends the derived label (point extent dilated by each kernel's
/// half-diagonal). Throws "placement rejected" when the dilated box leaves
/// the scene or any point misses the sea entity.
void place_object(SynthScene& scene, ObjectClass cls, const ClusterGeometry& geometry,
                  std::pair<int, int> anchor, double rotation_deg,
                  const std::vector<KernelSpec>& kernels);

/// The label box place_object would derive, before normalization.
PixelBBox placement_box(const ClusterGeometry& geometry, std::pair<int, int> anchor,
                        double rotation_deg, const std::vector<KernelSpec>& kernels);

}  // namespace opdet::synthgen
