#include "opdet/synthgen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdet::synthgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::vector<Vec2> placed_points(const ClusterGeometry& geometry, std::pair<int, int> anchor,
                                double rotation_deg) {
    const double theta = rotation_deg * kPi / 180.0;
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<Vec2> out;
    out.reserve(geometry.points.size());
    for (const auto& p : geometry.points) {
        out.push_back({anchor.first + c * p.x - s * p.y, anchor.second + s * p.x + c * p.y});
    }
    return out;
}

}  // namespace

AnchorGrid make_anchor_grid(const EntityMap& entities, int spacing, Rng& rng, std::uint64_t seed,
                            double jitter_px) {
    if (spacing < 1) throw std::invalid_argument("anchor spacing must be >= 1");
    if (jitter_px < 0.0) jitter_px = spacing / 4.0;

    AnchorGrid grid;
    grid.spacing = spacing;
    grid.seed = seed;

    const int cells_x = entities.width / spacing;
    const int cells_y = entities.height / spacing;
    for (int cy = 0; cy < cells_y; ++cy) {
        for (int cx = 0; cx < cells_x; ++cx) {
            bool all_sea = true;
            for (int y = cy * spacing; all_sea && y < (cy + 1) * spacing; ++y) {
                for (int x = cx * spacing; x < (cx + 1) * spacing; ++x) {
                    if (entities.at(x, y) != Entity::Sea) {
                        all_sea = false;
                        break;
                    }
                }
            }
            if (!all_sea) continue;
            const double jx = (cx + 0.5) * spacing + rng.uniform(-jitter_px, jitter_px);
            const double jy = (cy + 0.5) * spacing + rng.uniform(-jitter_px, jitter_px);
            const int px = round_half_up(jx);
            const int py = round_half_up(jy);
            if (entities.is_sea(px, py)) grid.points.push_back({px, py});
        }
    }
    return grid;
}

AnchorGrid make_anchor_grid(const EntityMap& entities, int spacing, std::uint64_t seed,
                            double jitter_px) {
    Rng rng(seed);
    return make_anchor_grid(entities, spacing, rng, seed, jitter_px);
}

PixelBBox placement_box(const ClusterGeometry& geometry, std::pair<int, int> anchor,
                        double rotation_deg, const std::vector<KernelSpec>& kernels) {
    if (geometry.points.empty()) throw std::invalid_argument("geometry has no points");
    if (kernels.size() != geometry.points.size())
        throw std::invalid_argument("one kernel per geometry point required");

    const std::vector<Vec2> pts = placed_points(geometry, anchor, rotation_deg);
    PixelBBox box{1e300, 1e300, -1e300, -1e300};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = kernel_dilation_radius(kernels[i]);
        box.x0 = std::min(box.x0, pts[i].x - r);
        box.y0 = std::min(box.y0, pts[i].y - r);
        box.x1 = std::max(box.x1, pts[i].x + r);
        box.y1 = std::max(box.y1, pts[i].y + r);
    }
    return box;
}

void place_object(SynthScene& scene, ObjectClass cls, const ClusterGeometry& geometry,
                  std::pair<int, int> anchor, double rotation_deg,
                  const std::vector<KernelSpec>& kernels) {
    const PixelBBox box = placement_box(geometry, anchor, rotation_deg, kernels);
    Raster8& bg = scene.background;
    if (box.x0 < 0.0 || box.y0 < 0.0 || box.x1 > bg.width || box.y1 > bg.height)
        throw std::runtime_error("placement rejected: out of bounds");

    const std::vector<Vec2> pts = placed_points(geometry, anchor, rotation_deg);
    for (const auto& p : pts) {
        if (!scene.entities.is_sea(round_half_up(p.x), round_half_up(p.y)))
            throw std::runtime_error("placement rejected: point off sea");
    }

    for (std::size_t i = 0; i < pts.size(); ++i) {
        const KernelStamp stamp = render_kernel(kernels[i]);
        const int cx = round_half_up(pts[i].x);
        const int cy = round_half_up(pts[i].y);
        const int x0 = cx - (stamp.width - 1) / 2;
        const int y0 = cy - (stamp.height - 1) / 2;
        for (int sy = 0; sy < stamp.height; ++sy) {
            for (int sx = 0; sx < stamp.width; ++sx) {
                const int x = x0 + sx, y = y0 + sy;
                if (!bg.in_bounds(x, y)) continue;
                const double v = std::min(255.0, stamp.at(sx, sy));
                const auto q = static_cast<std::uint8_t>(std::floor(v + 0.5));
                auto& dst = bg.at(x, y);
                dst = std::max(dst, q);
            }
        }
    }

    SynthObject obj;
    obj.cls = cls;
    obj.geometry = geometry;
    obj.anchor = anchor;
    obj.rotation_deg = rotation_deg;
    obj.kernels = kernels;
    scene.objects.push_back(std::move(obj));
    scene.labels.push_back(Label::from_box(cls, box, bg.width, bg.height));
}

}  // namespace opdet::synthgen
