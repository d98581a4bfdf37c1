#include <doctest.h>

#include <cmath>
#include <set>

#include "opdet/io/records.hpp"
#include "opdet/synthgen/cluster.hpp"
#include "opdet/synthgen/entity_map.hpp"
#include "opdet/synthgen/generator.hpp"
#include "opdet/synthgen/kernel.hpp"
#include "opdet/synthgen/scene.hpp"
#include "testutil.hpp"

using namespace opdet;
using namespace opdet::synthgen;

namespace {

EntityMap all_sea(int w, int h) {
    EntityMap em;
    em.width = w;
    em.height = h;
    em.classes.assign(static_cast<std::size_t>(w) * h, Entity::Sea);
    return em;
}

// O(n^2) distance oracle: is any land pixel within radius?
bool near_land_brute(const Raster8& mask, int x, int y, double radius) {
    const double r2 = radius * radius;
    for (int ly = 0; ly < mask.height; ++ly) {
        for (int lx = 0; lx < mask.width; ++lx) {
            if (!mask.values[static_cast<std::size_t>(ly) * mask.width + lx]) continue;
            const double dx = lx - x, dy = ly - y;
            if (dx * dx + dy * dy <= r2) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("build_entity_map: trivial masks") {
    PipelineConfig cfg;
    const auto sea = build_entity_map(Raster8::filled(8, 8, 0), cfg);
    CHECK(std::all_of(sea.classes.begin(), sea.classes.end(),
                      [](Entity e) { return e == Entity::Sea; }));
    const auto land = build_entity_map(Raster8::filled(8, 8, 1), cfg);
    CHECK(std::all_of(land.classes.begin(), land.classes.end(),
                      [](Entity e) { return e == Entity::Land; }));
}

TEST_CASE("build_entity_map: single land pixel yields a 100 px coast disk") {
    PipelineConfig cfg;  // coast buffer 1000 m / 10 m = 100 px
    Raster8 mask = Raster8::filled(400, 400, 0);
    mask.at(200, 200) = 1;
    const EntityMap em = build_entity_map(mask, cfg);
    CHECK(em.at(200, 200) == Entity::Land);
    // spot checks against the exact disk rule
    CHECK(em.at(200, 100) == Entity::Coast);   // distance 100
    CHECK(em.at(200, 99) == Entity::Sea);      // distance 101
    CHECK(em.at(130, 130) == Entity::Coast);   // distance ~99.0
    CHECK(em.at(129, 129) == Entity::Sea);     // distance ~100.4
    int coast = 0;
    for (Entity e : em.classes) coast += e == Entity::Coast;
    // |{(dx,dy) != 0 : dx^2+dy^2 <= 100^2}| = 31417 - 1
    CHECK(coast == 31416);
}

TEST_CASE("build_entity_map: matches brute-force distance oracle on random masks") {
    PipelineConfig cfg;
    cfg.coast_buffer_m = 100.0;  // 10 px buffer on small test images
    Rng rng(99);
    for (int t = 0; t < 10; ++t) {
        Raster8 mask = Raster8::filled(48, 40, 0);
        const int blobs = rng.uniform_int(0, 4);
        for (int b = 0; b < blobs; ++b) {
            const int cx = rng.uniform_int(0, 47), cy = rng.uniform_int(0, 39);
            const int r = rng.uniform_int(1, 5);
            for (int y = std::max(0, cy - r); y <= std::min(39, cy + r); ++y) {
                for (int x = std::max(0, cx - r); x <= std::min(47, cx + r); ++x) mask.at(x, y) = 1;
            }
        }
        const EntityMap em = build_entity_map(mask, cfg);
        for (int y = 0; y < 40; ++y) {
            for (int x = 0; x < 48; ++x) {
                Entity expect;
                if (mask.at(x, y)) {
                    expect = Entity::Land;
                } else if (near_land_brute(mask, x, y, 10.0)) {
                    expect = Entity::Coast;
                } else {
                    expect = Entity::Sea;
                }
                REQUIRE(em.at(x, y) == expect);
            }
        }
    }
}

TEST_CASE("screen_background: sea-entity rule") {
    const EntityMap em = all_sea(32, 32);
    CHECK(screen_background(Raster8::filled(32, 32, 30), em));
    Raster8 bright = Raster8::filled(32, 32, 30);
    bright.at(5, 5) = 200;
    CHECK_FALSE(screen_background(bright, em));

    // bright pixels on land do not reject
    Raster8 mask = Raster8::filled(32, 32, 0);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 8; ++x) mask.at(x, y) = 1;
    }
    PipelineConfig cfg;
    cfg.coast_buffer_m = 50.0;  // 5 px coast strip
    const EntityMap coastal = build_entity_map(mask, cfg);
    Raster8 scene = Raster8::filled(32, 32, 30);
    scene.at(2, 10) = 250;  // land pixel
    CHECK(screen_background(scene, coastal));
    scene.at(30, 10) = 250;  // sea pixel
    CHECK_FALSE(screen_background(scene, coastal));
}

TEST_CASE("make_anchor_grid: cell-center rule with zero jitter") {
    const EntityMap em = all_sea(100, 100);
    const AnchorGrid grid = make_anchor_grid(em, 25, 42, 0.0);
    REQUIRE(grid.points.size() == 16);
    std::set<std::pair<int, int>> pts(grid.points.begin(), grid.points.end());
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            // centers at 12.5+25k, rounded half up
            CHECK(pts.count({13 + 25 * i, 13 + 25 * j}) == 1);
        }
    }
    CHECK(grid.seed == 42);
    CHECK(grid.spacing == 25);
}

TEST_CASE("make_anchor_grid: all-land scene yields no anchors") {
    EntityMap em = all_sea(64, 64);
    std::fill(em.classes.begin(), em.classes.end(), Entity::Land);
    CHECK(make_anchor_grid(em, 16, 1).points.empty());
}

TEST_CASE("make_anchor_grid: deterministic and respects min spacing") {
    const EntityMap em = all_sea(300, 300);
    const AnchorGrid a = make_anchor_grid(em, 40, 7);
    const AnchorGrid b = make_anchor_grid(em, 40, 7);
    CHECK(a.points == b.points);
    CHECK_FALSE(a.points.empty());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        for (std::size_t j = i + 1; j < a.points.size(); ++j) {
            const double dx = a.points[i].first - a.points[j].first;
            const double dy = a.points[i].second - a.points[j].second;
            CHECK(std::hypot(dx, dy) >= 40.0 / 2.0 - 1.0);  // -1 for rounding
        }
    }
    // every anchor sits on sea
    for (const auto& [x, y] : a.points) CHECK(em.is_sea(x, y));
}

TEST_CASE("gen_cluster_geometry: inclusive endpoint spacing") {
    ClusterParams p;
    p.n_lines = {1, 1};
    p.line_length_px = {40.0, 40.0};
    p.point_spacing_px = {10.0, 10.0};
    Rng rng(3);
    const ClusterGeometry g = gen_cluster_geometry(p, rng);
    REQUIRE(g.lines.size() == 1);
    REQUIRE(g.points.size() == 5);
    // distances from origin along the single segment: 0,10,20,30,40
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const double d = std::hypot(g.points[i].x, g.points[i].y);
        CHECK(d == doctest::Approx(10.0 * i).epsilon(1e-9));
    }
}

TEST_CASE("gen_cluster_geometry: 90 degree connection is perpendicular") {
    ClusterParams p;
    p.n_lines = {2, 2};
    p.connection_angles_deg = {90.0};
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const ClusterGeometry g = gen_cluster_geometry(p, rng);
        REQUIRE(g.lines.size() == 2);
        const auto d0x = g.lines[0].p1.x - g.lines[0].p0.x;
        const auto d0y = g.lines[0].p1.y - g.lines[0].p0.y;
        const auto d1x = g.lines[1].p1.x - g.lines[1].p0.x;
        const auto d1y = g.lines[1].p1.y - g.lines[1].p0.y;
        const double dot = (d0x * d1x + d0y * d1y) / (std::hypot(d0x, d0y) * std::hypot(d1x, d1y));
        CHECK(std::abs(dot) < 1e-9);
    }
}

TEST_CASE("gen_cluster_geometry: determinism, connectivity, points on segments") {
    ClusterParams p;
    Rng r1(11), r2(11);
    const ClusterGeometry a = gen_cluster_geometry(p, r1);
    const ClusterGeometry b = gen_cluster_geometry(p, r2);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
    }

    Rng rng(123);
    for (int t = 0; t < 50; ++t) {
        const ClusterGeometry g = gen_cluster_geometry(p, rng);
        CHECK(g.points.size() >= 2);

        // every point lies on some segment within 0.5 px
        for (const auto& pt : g.points) {
            double best = 1e9;
            for (const auto& seg : g.lines) {
                const double vx = seg.p1.x - seg.p0.x, vy = seg.p1.y - seg.p0.y;
                const double len2 = vx * vx + vy * vy;
                double u = ((pt.x - seg.p0.x) * vx + (pt.y - seg.p0.y) * vy) / len2;
                u = std::clamp(u, 0.0, 1.0);
                best = std::min(best, std::hypot(pt.x - (seg.p0.x + u * vx),
                                                 pt.y - (seg.p0.y + u * vy)));
            }
            CHECK(best <= 0.5);
        }

        // connectivity: grow a reachable set from segment 0 via shared endpoints
        std::vector<bool> reached(g.lines.size(), false);
        reached[0] = true;
        bool grew = true;
        auto touches = [](const Segment& s, const Segment& t) {
            auto close = [](const Vec2& a, const Vec2& b) {
                return std::hypot(a.x - b.x, a.y - b.y) < 1e-6;
            };
            return close(s.p0, t.p0) || close(s.p0, t.p1) || close(s.p1, t.p0) ||
                   close(s.p1, t.p1);
        };
        while (grew) {
            grew = false;
            for (std::size_t i = 0; i < g.lines.size(); ++i) {
                if (reached[i]) continue;
                for (std::size_t j = 0; j < g.lines.size(); ++j) {
                    if (reached[j] && touches(g.lines[i], g.lines[j])) {
                        reached[i] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        CHECK(std::all_of(reached.begin(), reached.end(), [](bool v) { return v; }));
    }
}

TEST_CASE("gen_cluster_geometry: degenerate params rejected") {
    Rng rng(1);
    ClusterParams bad;
    bad.n_lines = {0, 0};
    CHECK_THROWS_WITH_AS(gen_cluster_geometry(bad, rng), "degenerate cluster params",
                         std::runtime_error);
    bad = ClusterParams{};
    bad.connection_angles_deg = {180.0};
    CHECK_THROWS_AS(gen_cluster_geometry(bad, rng), std::runtime_error);
    bad = ClusterParams{};
    bad.point_spacing_px = {0.0, 4.0};
    CHECK_THROWS_AS(gen_cluster_geometry(bad, rng), std::runtime_error);
}

TEST_CASE("gen_point_geometry: one point, clusters rejected") {
    CHECK(gen_point_geometry(ObjectClass::SinglePlatform).points.size() == 1);
    CHECK(gen_point_geometry(ObjectClass::WindTurbine).points.size() == 1);
    CHECK(gen_point_geometry(ObjectClass::WindTurbine).lines.empty());
    CHECK_THROWS_AS(gen_point_geometry(ObjectClass::PlatformCluster), std::runtime_error);
}

TEST_CASE("render_kernel: single pixel, peak at center") {
    KernelSpec spec;
    spec.size = {1, 1};
    spec.sigma = {1.0, 1.0};
    spec.peak = 200.0;
    const KernelStamp one = render_kernel(spec);
    CHECK(one.values.size() == 1);
    CHECK(one.values[0] == 200.0);

    spec.size = {15, 11};
    spec.sigma = {4.0, 2.0};
    spec.orientation_deg = 35.0;
    const KernelStamp k = render_kernel(spec);
    const double center = k.at(5, 7);
    CHECK(center == doctest::Approx(200.0));
    for (double v : k.values) CHECK(v <= center + 1e-12);
}

TEST_CASE("render_kernel: isotropic kernels ignore orientation") {
    KernelSpec a;
    a.size = {13, 13};
    a.sigma = {3.0, 3.0};
    a.peak = 180.0;
    KernelSpec b = a;
    b.orientation_deg = 117.3;
    const KernelStamp sa = render_kernel(a);
    const KernelStamp sb = render_kernel(b);
    for (std::size_t i = 0; i < sa.values.size(); ++i) {
        CHECK(sa.values[i] == doctest::Approx(sb.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("render_kernel: stamp energy grows with either sigma") {
    auto energy = [](const KernelSpec& s) {
        const KernelStamp k = render_kernel(s);
        double sum = 0.0;
        for (double v : k.values) sum += v;
        return sum;
    };
    KernelSpec s;
    s.size = {21, 21};
    s.peak = 250.0;
    s.sigma = {3.0, 2.0};
    double prev = energy(s);
    for (double major : {4.0, 5.0, 6.0}) {
        s.sigma.first = major;
        const double e = energy(s);
        CHECK(e > prev);
        prev = e;
    }
    s.sigma = {6.0, 1.5};
    prev = energy(s);
    for (double minor : {2.5, 3.5, 4.5}) {
        s.sigma.second = minor;
        const double e = energy(s);
        CHECK(e > prev);
        prev = e;
    }
}

namespace {

SynthScene sea_scene(int w, int h, std::uint8_t value = 20) {
    SynthScene scene;
    scene.background = Raster8::filled(w, h, value);
    scene.entities = all_sea(w, h);
    return scene;
}

KernelSpec square_kernel(int size, double peak = 220.0) {
    KernelSpec k;
    k.size = {size, size};
    k.peak = peak;
    k.sigma = {size / 4.0, size / 5.0};
    return k;
}

}  // namespace

TEST_CASE("place_object: label box is the dilated point extent") {
    SynthScene scene = sea_scene(256, 256);
    const ClusterGeometry g = gen_point_geometry(ObjectClass::SinglePlatform);
    place_object(scene, ObjectClass::SinglePlatform, g, {100, 100}, 0.0,
                 {square_kernel(21)});
    REQUIRE(scene.labels.size() == 1);
    const PixelBBox box = scene.labels[0].box_px(256, 256);
    const double r = std::hypot(10.0, 10.0);  // half-diagonal of the 21x21 extent
    CHECK(box.x0 == doctest::Approx(100.0 - r).epsilon(1e-6));
    CHECK(box.x1 == doctest::Approx(100.0 + r).epsilon(1e-6));
    CHECK(box.y0 == doctest::Approx(100.0 - r).epsilon(1e-6));
    CHECK(box.y1 == doctest::Approx(100.0 + r).epsilon(1e-6));
}

TEST_CASE("place_object: max blend is idempotent, untouched pixels unchanged") {
    SynthScene scene = sea_scene(128, 128);
    const ClusterGeometry g = gen_point_geometry(ObjectClass::SinglePlatform);
    const std::vector<KernelSpec> kernels{square_kernel(9)};
    place_object(scene, ObjectClass::SinglePlatform, g, {64, 64}, 0.0, kernels);
    const Raster8 once = scene.background;
    place_object(scene, ObjectClass::SinglePlatform, g, {64, 64}, 0.0, kernels);
    CHECK(scene.background.values == once.values);
    CHECK(scene.background.at(5, 5) == 20);  // far from any stamp
    CHECK(scene.background.at(64, 64) == 220);
}

TEST_CASE("place_object: rejects out-of-bounds and off-sea placements") {
    SynthScene scene = sea_scene(64, 64);
    const ClusterGeometry g = gen_point_geometry(ObjectClass::SinglePlatform);
    CHECK_THROWS_AS(
        place_object(scene, ObjectClass::SinglePlatform, g, {2, 2}, 0.0, {square_kernel(21)}),
        std::runtime_error);

    SynthScene land = sea_scene(64, 64);
    std::fill(land.entities.classes.begin(), land.entities.classes.end(), Entity::Land);
    CHECK_THROWS_AS(
        place_object(land, ObjectClass::SinglePlatform, g, {32, 32}, 0.0, {square_kernel(9)}),
        std::runtime_error);
    CHECK(land.labels.empty());
}

TEST_CASE("place_object: footprint containment for rotated clusters") {
    Rng rng(77);
    ClusterParams params;
    for (int t = 0; t < 30; ++t) {
        SynthScene scene = sea_scene(640, 640);
        const Raster8 before = scene.background;
        const ClusterGeometry g = gen_cluster_geometry(params, rng);
        std::vector<KernelSpec> kernels;
        for (std::size_t i = 0; i < g.points.size(); ++i) {
            kernels.push_back(square_kernel(rng.uniform_int(4, 15) | 1));
        }
        const double rot = rng.uniform(0.0, 360.0);
        try {
            place_object(scene, ObjectClass::PlatformCluster, g, {320, 320}, rot, kernels);
        } catch (const std::runtime_error&) {
            continue;  // placement rejected is fine here
        }
        const PixelBBox box = scene.labels.back().box_px(640, 640);
        for (int y = 0; y < 640; ++y) {
            for (int x = 0; x < 640; ++x) {
                if (scene.background.at(x, y) != before.at(x, y)) {
                    REQUIRE(scene.background.at(x, y) > before.at(x, y));  // max blend brightens
                    REQUIRE(x >= box.x0);
                    REQUIRE(x <= box.x1);
                    REQUIRE(y >= box.y0);
                    REQUIRE(y <= box.y1);
                }
            }
        }
    }
}

TEST_CASE("balance_manifest: published counts") {
    auto m = balance_manifest({271, 0, 0}, {2477, 0, 0});
    CHECK(m.synthetic[0] == 2206);
    m = balance_manifest({271, 0, 0}, {5000, 0, 0});
    CHECK(m.synthetic[0] == 4729);
    m = balance_manifest({500, 0, 0}, {400, 0, 0});
    CHECK(m.synthetic[0] == 0);
    CHECK_THROWS_AS(balance_manifest({-1, 0, 0}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("manifest json round trip") {
    testutil::TempDir dir("manifest");
    const auto m = balance_manifest({2333, 271, 2920}, {5000, 5000, 5000}, 99);
    write_manifest(m, dir.file("m.json"));
    const auto back = read_manifest(dir.file("m.json"));
    CHECK(back.synthetic == std::array<int, 3>{2667, 4729, 2080});
    CHECK(back.seed == 99);
}

TEST_CASE("generate_dataset: exact count accounting") {
    testutil::TempDir dir("gen");
    Background bg;
    bg.raster = testutil::speckle_sea(640, 640, 21);
    bg.entities = all_sea(640, 640);
    std::vector<Background> backgrounds;
    backgrounds.push_back(std::move(bg));

    GenerationManifest m;
    m.synthetic = {0, 3, 0};
    m.seed = 31;
    const auto outputs = generate_dataset(m, backgrounds, PipelineConfig{}, SynthParams{},
                                          dir.file("out"));
    int clusters = 0, others = 0;
    for (const auto& o : outputs) {
        for (const auto& label : opdet::io::read_labels(o.label_path)) {
            if (label.cls == ObjectClass::PlatformCluster) {
                ++clusters;
            } else {
                ++others;
            }
        }
    }
    CHECK(clusters == 3);
    CHECK(others == 0);
}

TEST_CASE("generate_dataset: same seed is byte-identical, empty manifest writes nothing") {
    testutil::TempDir dir("det");
    Background bg;
    bg.raster = testutil::speckle_sea(640, 640, 22);
    bg.entities = all_sea(640, 640);
    std::vector<Background> backgrounds;
    backgrounds.push_back(std::move(bg));

    GenerationManifest m;
    m.synthetic = {4, 2, 3};
    m.seed = 77;
    const auto run1 = generate_dataset(m, backgrounds, PipelineConfig{}, SynthParams{},
                                       dir.file("a"));
    const auto run2 = generate_dataset(m, backgrounds, PipelineConfig{}, SynthParams{},
                                       dir.file("b"));
    REQUIRE(run1.size() == run2.size());
    for (std::size_t i = 0; i < run1.size(); ++i) {
        CHECK(testutil::slurp(run1[i].image_path) == testutil::slurp(run2[i].image_path));
        CHECK(testutil::slurp(run1[i].label_path) == testutil::slurp(run2[i].label_path));
    }

    GenerationManifest zero;
    const auto none = generate_dataset(zero, backgrounds, PipelineConfig{}, SynthParams{},
                                       dir.file("c"));
    CHECK(none.empty());
    CHECK_FALSE(std::filesystem::exists(dir.file("c/synth_000000.pgm")));
}

TEST_CASE("generate_dataset: rejects when no background passes screening") {
    testutil::TempDir dir("rej");
    Background bg;
    bg.raster = Raster8::filled(640, 640, 200);  // bright sea everywhere
    bg.entities = all_sea(640, 640);
    std::vector<Background> backgrounds;
    backgrounds.push_back(std::move(bg));
    GenerationManifest m;
    m.synthetic = {1, 0, 0};
    CHECK_THROWS_WITH_AS(generate_dataset(m, backgrounds, PipelineConfig{}, SynthParams{},
                                          dir.file("out")),
                         "no accepted backgrounds", std::runtime_error);
}
