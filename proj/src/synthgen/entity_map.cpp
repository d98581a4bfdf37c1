#include "opdet/synthgen/entity_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace opdet::synthgen {

namespace {

constexpr double kFar = 1e18;

// 1D squared-distance lower envelope (Felzenszwalb & Huttenlocher).
// Parabolas at height >= kFar mark empty positions and are skipped.
void edt_1d(const double* f, int n, double* d, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < n; ++q) {
        if (f[q] >= kFar) continue;
        while (true) {
            if (f[v[k]] >= kFar) {
                v[k] = q;  // first finite parabola replaces the sentinel
                z[k] = -kFar;
                z[k + 1] = kFar;
                break;
            }
            const double s =
                ((f[q] + static_cast<double>(q) * q) - (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
                continue;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kFar;
            break;
        }
    }
    if (f[v[0]] >= kFar) {
        for (int q = 0; q < n; ++q) d[q] = kFar;
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const Raster8& mask) {
    mask.validate();
    const int w = mask.width;
    const int h = mask.height;
    std::vector<double> dist(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        dist[i] = mask.values[i] ? 0.0 : kFar;
    }

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    // columns, then rows
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = dist[static_cast<std::size_t>(y) * w + x];
        edt_1d(f.data(), h, d.data(), v.data(), z.data());
        for (int y = 0; y < h; ++y) dist[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) {
        double* row = &dist[static_cast<std::size_t>(y) * w];
        std::copy(row, row + w, f.data());
        edt_1d(f.data(), w, d.data(), v.data(), z.data());
        std::copy(d.data(), d.data() + w, row);
    }
    return dist;
}

EntityMap build_entity_map(const Raster8& land_mask, const PipelineConfig& cfg) {
    land_mask.validate();
    cfg.validate();
    EntityMap em;
    em.width = land_mask.width;
    em.height = land_mask.height;
    em.classes.resize(land_mask.size());

    const double buffer_px = cfg.coast_buffer_px();
    const double buffer_sq = buffer_px * buffer_px;
    const std::vector<double> dist = squared_distance_transform(land_mask);
    for (std::size_t i = 0; i < em.classes.size(); ++i) {
        if (land_mask.values[i]) {
            em.classes[i] = Entity::Land;
        } else if (dist[i] <= buffer_sq) {
            em.classes[i] = Entity::Coast;
        } else {
            em.classes[i] = Entity::Sea;
        }
    }
    return em;
}

bool screen_background(const Raster8& scene, const EntityMap& entities, int reject_threshold) {
    scene.validate();
    if (scene.width != entities.width || scene.height != entities.height)
        throw std::runtime_error("shape mismatch");
    for (std::size_t i = 0; i < scene.values.size(); ++i) {
        if (entities.classes[i] == Entity::Sea && scene.values[i] >= reject_threshold) return false;
    }
    return true;
}

}  // namespace opdet::synthgen
