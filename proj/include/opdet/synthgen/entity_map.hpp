#pragma once

#include <cstdint>
#include <vector>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"

namespace opdet::synthgen {

enum class Entity : std::uint8_t { Land = 0, Coast = 1, Sea = 2 };

/// Per-pixel scene segmentation into land, coast (1 km land buffer), and sea.
struct EntityMap {
    int width = 0;
    int height = 0;
    std::vector<Entity> classes;

    Entity at(int x, int y) const { return classes[static_cast<std::size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool is_sea(int x, int y) const { return in_bounds(x, y) && at(x, y) == Entity::Sea; }
};

/// Exact squared Euclidean distance (pixel centers) to the nearest set pixel
/// of `mask` (nonzero = set). Unreachable pixels get a large sentinel.
std::vector<double> squared_distance_transform(const Raster8& mask);

/// Land where the mask is set; coast within coast_buffer_m/pixel_size_m
/// pixels (Euclidean) of land; sea elsewhere.
EntityMap build_entity_map(const Raster8& land_mask, const PipelineConfig& cfg);

/// Scene screening for synthetic backgrounds: accept only when no sea pixel
/// reaches reject_threshold, i.e. the marine area is free of bright
/// interfering objects.
bool screen_background(const Raster8& scene, const EntityMap& entities,
                       int reject_threshold = 120);

}  // namespace opdet::synthgen
