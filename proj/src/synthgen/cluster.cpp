#include "opdet/synthgen/cluster.hpp"

#include <cmath>
#include <stdexcept>

namespace opdet::synthgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec2 rotate(const Vec2& v, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

bool near(const Vec2& a, const Vec2& b, double tol = 1e-6) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

void append_point(std::vector<Vec2>& points, const Vec2& p) {
    for (const auto& q : points) {
        if (near(q, p)) return;
    }
    points.push_back(p);
}

}  // namespace

void ClusterParams::validate() const {
    const bool ok = n_lines.first >= 1 && n_lines.second >= n_lines.first &&
                    line_length_px.first > 0.0 && line_length_px.second >= line_length_px.first &&
                    point_spacing_px.first > 0.0 &&
                    point_spacing_px.second >= point_spacing_px.first &&
                    !connection_angles_deg.empty();
    if (!ok) throw std::runtime_error("degenerate cluster params");
    for (double a : connection_angles_deg) {
        if (!(a > 0.0 && a < 180.0)) throw std::runtime_error("degenerate cluster params");
    }
}

ClusterGeometry gen_cluster_geometry(const ClusterParams& params, Rng& rng) {
    params.validate();
    ClusterGeometry geo;

    const int n = rng.uniform_int(params.n_lines.first, params.n_lines.second);

    // endpoint candidates carry the outgoing direction of their segment
    struct Endpoint {
        Vec2 pos;
        Vec2 dir;
    };
    std::vector<Endpoint> endpoints;

    const double heading = rng.uniform(0.0, 2.0 * kPi);
    Vec2 dir{std::cos(heading), std::sin(heading)};
    double len = rng.uniform(params.line_length_px.first, params.line_length_px.second);
    geo.lines.push_back({{0.0, 0.0}, {dir.x * len, dir.y * len}});
    endpoints.push_back({{0.0, 0.0}, {-dir.x, -dir.y}});
    endpoints.push_back({geo.lines.back().p1, dir});

    for (int k = 1; k < n; ++k) {
        const Endpoint start = endpoints[rng.index(endpoints.size())];
        const double turn = rng.pick(params.connection_angles_deg) * (kPi / 180.0) *
                            (rng.bernoulli(0.5) ? 1.0 : -1.0);
        const Vec2 new_dir = rotate(start.dir, turn);
        len = rng.uniform(params.line_length_px.first, params.line_length_px.second);
        const Vec2 end{start.pos.x + new_dir.x * len, start.pos.y + new_dir.y * len};
        geo.lines.push_back({start.pos, end});
        endpoints.push_back({end, new_dir});
    }

    for (const auto& seg : geo.lines) {
        const double dx = seg.p1.x - seg.p0.x;
        const double dy = seg.p1.y - seg.p0.y;
        const double seg_len = std::hypot(dx, dy);
        const double spacing =
            rng.uniform(params.point_spacing_px.first, params.point_spacing_px.second);
        const Vec2 u{dx / seg_len, dy / seg_len};
        for (double t = 0.0; t < seg_len; t += spacing) {
            append_point(geo.points, {seg.p0.x + u.x * t, seg.p0.y + u.y * t});
        }
        append_point(geo.points, seg.p1);
    }
    return geo;
}

ClusterGeometry gen_point_geometry(ObjectClass cls) {
    if (cls == ObjectClass::PlatformCluster)
        throw std::runtime_error("point geometry is not defined for platform clusters");
    ClusterGeometry geo;
    geo.points.push_back({0.0, 0.0});
    return geo;
}

}  // namespace opdet::synthgen
