// Exercises the installed command-line surface end to end by spawning the
// binary (path injected by the build as OPDET_BIN).

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "opdet/core/config.hpp"
#include "opdet/io/chips.hpp"
#include "opdet/io/raster_io.hpp"
#include "opdet/io/records.hpp"
#include "opdet/synthgen/generator.hpp"
#include "testutil.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string output;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + std::string(OPDET_BIN) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int rc = pclose(pipe);
    r.status = WEXITSTATUS(rc);
    return r;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("cli: help exits 0, usage errors exit 2") {
    CHECK(run("--help").status == 0);
    CHECK(run("quantize --help").status == 0);
    CHECK(run("nonsense").status == 2);
    CHECK(run("quantize --out only.pgm").status == 2);  // missing required --in

    const RunResult missing = run("quantize --in /no/such/file.pfm --out /tmp/x.pgm");
    CHECK(missing.status == 2);
    CHECK(missing.output.find("/no/such/file.pfm") != std::string::npos);
}

TEST_CASE("cli: composite -> quantize -> chip round trip") {
    testutil::TempDir dir("cli_pre");

    // 3-frame stack over a 704x650 tile with one transient bright pixel
    std::filesystem::create_directories(dir.file("stack"));
    for (int f = 0; f < 3; ++f) {
        opdet::RasterF r = opdet::RasterF::filled(704, 650, -25.0f);
        if (f == 0) r.at(100, 100) = -2.0f;  // transient: median must remove it
        opdet::io::write_pfm(r, dir.file("stack/s" + std::to_string(f) + ".pfm"));
    }
    CHECK(run("composite --stack " + dir.file("stack") + " --out " + dir.file("med.pfm")).status ==
          0);
    CHECK(run("quantize --in " + dir.file("med.pfm") + " --out " + dir.file("tile.pgm")).status ==
          0);
    const opdet::Raster8 tile = opdet::io::read_pgm(dir.file("tile.pgm"));
    CHECK(tile.at(100, 100) == tile.at(5, 5));  // transient removed before quantization

    write_text(dir.file("gt.json"), "{\"geotransform\": [10.0, 1e-4, 0, 54.0, 0, -1e-4]}");
    const RunResult chips = run("chip --in " + dir.file("tile.pgm") + " --gt " +
                                dir.file("gt.json") + " --out " + dir.file("chips") +
                                " --tile-id T7");
    CHECK(chips.status == 0);
    CHECK(std::filesystem::exists(dir.file("chips/T7_0_0.pgm")));
    CHECK(std::filesystem::exists(dir.file("chips/T7_1_0.json")));  // 704 -> snapped second chip
    const auto sidecar = json::parse(testutil::slurp(dir.file("chips/T7_1_0.json")));
    CHECK(sidecar["tile_id"] == "T7");
    CHECK(sidecar["offset_px"][0] == 64);
    CHECK(sidecar["crs"] == "EPSG:4326");
}

TEST_CASE("cli: grid honors config override file") {
    testutil::TempDir dir("cli_grid");
    write_text(dir.file("cfg.json"), "{\"grid_step_m\": 50000, \"grid_tile_m\": 60000}");
    CHECK(run("grid --roi 0,0,100000,50000 --out " + dir.file("t.json") + " --config " +
              dir.file("cfg.json")).status == 0);
    const auto tiles = json::parse(testutil::slurp(dir.file("t.json")));
    CHECK(tiles["tiles"].size() == 2);
    CHECK(tiles["tiles"][1]["bounds_m"][0] == 50000.0);
    CHECK(run("grid --roi 0,0,0,0 --out " + dir.file("bad.json")).status == 1);

    // OPDET_CONFIG supplies the config path when --config is absent
    const std::string env = "OPDET_CONFIG=" + dir.file("cfg.json") + " ";
    CHECK(run("grid --roi 0,0,100000,50000 --out " + dir.file("t2.json"), env).status == 0);
    const auto tiles2 = json::parse(testutil::slurp(dir.file("t2.json")));
    CHECK(tiles2["tiles"].size() == 2);
}

TEST_CASE("cli: balance and synth stage commands") {
    testutil::TempDir dir("cli_synth");
    CHECK(run("balance --real 2330,271,2920 --target 2330,2477,2920 --seed 7 --out " +
              dir.file("m.json")).status == 0);
    const auto manifest = json::parse(testutil::slurp(dir.file("m.json")));
    CHECK(manifest["classes"][1]["synthetic"] == 2206);

    std::filesystem::create_directories(dir.file("bg"));
    opdet::io::write_pgm(testutil::speckle_sea(640, 640, 77), dir.file("bg/sea.pgm"));
    // a coastal background via its land-mask sidecar
    opdet::io::write_pgm(testutil::speckle_sea(640, 640, 78), dir.file("bg/coast.pgm"));
    opdet::Raster8 mask = opdet::Raster8::filled(640, 640, 0);
    for (int y = 0; y < 640; ++y) {
        for (int x = 0; x < 120; ++x) mask.at(x, y) = 1;
    }
    opdet::io::write_pgm(mask, dir.file("bg/coast.land.pgm"));

    write_text(dir.file("small.json"),
               json{{"classes", json::array({json{{"class_id", 0}, {"real", 0}, {"target", 4}},
                                             json{{"class_id", 1}, {"real", 0}, {"target", 3}},
                                             json{{"class_id", 2}, {"real", 0}, {"target", 2}}})},
                    {"seed", 12}}
                   .dump());
    const RunResult synth = run("synth --manifest " + dir.file("small.json") + " --backgrounds " +
                                dir.file("bg") + " --out " + dir.file("scenes") + " --seed 12");
    CHECK(synth.status == 0);
    int objects = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir.file("scenes"))) {
        if (entry.path().extension() == ".txt") {
            objects += static_cast<int>(opdet::io::read_labels(entry.path().string()).size());
        }
    }
    CHECK(objects == 9);
}

TEST_CASE("cli: full synthetic pipeline run is reproducible") {
    testutil::TempDir dir("cli_pipe");

    std::filesystem::create_directories(dir.file("bg"));
    opdet::io::write_pgm(testutil::speckle_sea(640, 640, 5), dir.file("bg/sea.pgm"));

    json manifest{{"classes", json::array({json{{"class_id", 0}, {"real", 0}, {"target", 8}},
                                           json{{"class_id", 1}, {"real", 0}, {"target", 5}},
                                           json{{"class_id", 2}, {"real", 0}, {"target", 6}}})},
                  {"seed", 2025}};
    json runcfg{
        {"workdir", dir.file("run")},
        {"seed", 2025},
        {"synth", {{"manifest", manifest}, {"backgrounds", dir.file("bg")}}},
        {"detector", {{"type", "oracle"}, {"jitter_px", 1.0}, {"dropout", 0.0}, {"spurious", 0.1}}},
        {"merge", true},
    };
    write_text(dir.file("run.json"), runcfg.dump());

    const RunResult first = run("pipeline --config " + dir.file("run.json"));
    CHECK(first.status == 0);
    CHECK(std::filesystem::exists(dir.file("run/report.json")));
    CHECK(std::filesystem::exists(dir.file("run/detections.geojson")));
    CHECK(std::filesystem::exists(dir.file("run/gt.jsonl")));

    const std::string geojson_first = testutil::slurp(dir.file("run/detections.geojson"));
    const std::string report_first = testutil::slurp(dir.file("run/report.json"));

    // rerunning with unchanged inputs overwrites outputs byte-identically
    const RunResult second = run("pipeline --config " + dir.file("run.json"));
    CHECK(second.status == 0);
    CHECK(testutil::slurp(dir.file("run/detections.geojson")) == geojson_first);
    CHECK(testutil::slurp(dir.file("run/report.json")) == report_first);

    // 19 labels, no dropout: every object comes back, spurious boxes removed
    const auto report = json::parse(report_first);
    int tp = 0, fn = 0, fp = 0;
    for (const auto& row : report["merged"]) {
        tp += row["tp"].get<int>();
        fn += row["fn"].get<int>();
        fp += row["fp"].get<int>();
    }
    CHECK(tp == 19);
    CHECK(fn == 0);
    CHECK(fp == 0);

    const RunResult rendered = run("report --report " + dir.file("run/report.json"));
    CHECK(rendered.status == 0);
    CHECK(rendered.output.find("Class") != std::string::npos);
    CHECK(rendered.output.find("wind_turbine") != std::string::npos);

    CHECK(run("report --report " + dir.file("run/gt.jsonl")).status == 2);  // malformed
    CHECK(run("pipeline --config /does/not/exist.json").status == 2);
}

TEST_CASE("cli: oracle-detect, postprocess, evaluate stage chain") {
    testutil::TempDir dir("cli_stage");
    const opdet::PipelineConfig cfg;

    // one synthetic scene as both chip and label source
    std::vector<opdet::synthgen::Background> bgs;
    bgs.push_back({testutil::speckle_sea(640, 640, 31),
                   opdet::synthgen::build_entity_map(opdet::Raster8::filled(640, 640, 0), cfg)});
    opdet::synthgen::GenerationManifest m;
    m.synthetic = {3, 2, 2};
    m.seed = 404;
    const auto scenes = opdet::synthgen::generate_dataset(m, bgs, cfg, {}, dir.file("scenes"));
    REQUIRE_FALSE(scenes.empty());

    // sidecars so postprocess can geolocate
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const auto raster = opdet::io::read_pgm(scenes[i].image_path);
        const std::string stem = std::filesystem::path(scenes[i].image_path).stem().string();
        opdet::io::ChipRecord rec{stem, "synth", {0, 0},
                                  {0.1 * static_cast<double>(i), 1e-4, 0, 0.064, 0, -1e-4},
                                  raster};
        opdet::io::write_chip(rec, dir.file("scenes"));
    }

    CHECK(run("oracle-detect --labels " + dir.file("scenes") +
              " --jitter 1 --dropout 0 --spurious 0 --seed 9 --out " + dir.file("dets.jsonl"))
              .status == 0);
    CHECK(run("postprocess --dets " + dir.file("dets.jsonl") + " --chips " + dir.file("scenes") +
              " --out " + dir.file("out.geojson"))
              .status == 0);

    // ground truth from the emitted labels, geolocated through the sidecars
    std::vector<opdet::io::GroundTruth> gts;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        const auto raster = opdet::io::read_pgm(scenes[i].image_path);
        const opdet::GeoTransform gt{0.1 * static_cast<double>(i), 1e-4, 0, 0.064, 0, -1e-4};
        for (const auto& label : opdet::io::read_labels(scenes[i].label_path)) {
            const auto g = opdet::geolocate(label.box_px(raster.width, raster.height), gt);
            opdet::io::GroundTruth entry;
            entry.x0 = g.lon_min;
            entry.y0 = g.lat_min;
            entry.x1 = g.lon_max;
            entry.y1 = g.lat_max;
            entry.cls = label.cls;
            entry.frame = opdet::io::Frame::Geo;
            gts.push_back(entry);
        }
    }
    opdet::io::write_ground_truth_jsonl(gts, dir.file("gt.jsonl"));

    const RunResult eval = run("evaluate --preds " + dir.file("out.geojson") + " --gt " +
                               dir.file("gt.jsonl") + " --merge --report " +
                               dir.file("report.json"));
    CHECK(eval.status == 0);
    CHECK(eval.output.find("overall (merged)") != std::string::npos);
    const auto report = json::parse(testutil::slurp(dir.file("report.json")));
    int tp = 0;
    for (const auto& row : report["merged"]) tp += row["tp"].get<int>();
    CHECK(tp == 7);
}

TEST_CASE("cli: pixel-frame evaluation from detection JSONL") {
    testutil::TempDir dir("cli_px");
    std::vector<opdet::Detection> dets(1);
    dets[0].chip_id = "c0";
    dets[0].cls = opdet::ObjectClass::WindTurbine;
    dets[0].confidence = 0.9;
    dets[0].box_px = {10, 10, 30, 30};
    opdet::io::write_detections_jsonl(dets, dir.file("p.jsonl"));

    std::vector<opdet::io::GroundTruth> gts(1);
    gts[0] = {11, 11, 31, 31, opdet::ObjectClass::WindTurbine, "r", opdet::io::Frame::Pixel, "c0"};
    opdet::io::write_ground_truth_jsonl(gts, dir.file("gt.jsonl"));

    const RunResult eval = run("evaluate --preds " + dir.file("p.jsonl") + " --gt " +
                               dir.file("gt.jsonl") + " --report " + dir.file("r.json"));
    CHECK(eval.status == 0);
    const auto report = json::parse(testutil::slurp(dir.file("r.json")));
    CHECK(report["classes"][2]["tp"] == 1);
}

TEST_CASE("cli: stack-mode pipeline with a command detector") {
    testutil::TempDir dir("cli_stack");

    // 3-frame stack with a persistent platform signature: present in every
    // frame, so the median keeps it and quantization leaves it above 150
    std::filesystem::create_directories(dir.file("stack"));
    for (int f = 0; f < 3; ++f) {
        opdet::RasterF r = opdet::RasterF::filled(704, 704, -28.0f);
        for (int y = 100; y < 112; ++y) {
            for (int x = 100; x < 112; ++x) r.at(x, y) = -6.0f;
        }
        opdet::io::write_pfm(r, dir.file("stack/f" + std::to_string(f) + ".pfm"));
    }

    const opdet::GeoTransform tile_gt{10.0, 1e-4, 0.0, 54.0, 0.0, -1e-4};
    std::vector<opdet::Detection> canned(2);
    canned[0].chip_id = "T_0_0";
    canned[0].cls = opdet::ObjectClass::SinglePlatform;
    canned[0].confidence = 0.9;
    canned[0].box_px = {96, 96, 116, 116};
    canned[1] = canned[0];  // duplicate from the overlapping chip
    canned[1].chip_id = "T_1_0";
    canned[1].confidence = 0.8;
    canned[1].box_px = {96 - 64, 96, 116 - 64, 116};  // second chip is snapped to offset 64
    opdet::io::write_detections_jsonl(canned, dir.file("canned.jsonl"));

    std::vector<opdet::io::GroundTruth> gts(1);
    const auto geo = opdet::geolocate({100, 100, 112, 112}, tile_gt);
    gts[0] = {geo.lon_min, geo.lat_min, geo.lon_max, geo.lat_max,
              opdet::ObjectClass::SinglePlatform, "test", opdet::io::Frame::Geo, ""};
    opdet::io::write_ground_truth_jsonl(gts, dir.file("gt.jsonl"));

    json runcfg{
        {"workdir", dir.file("run")},
        {"input",
         {{"stack", dir.file("stack")},
          {"tile_id", "T"},
          {"geotransform", {10.0, 1e-4, 0.0, 54.0, 0.0, -1e-4}}}},
        {"detector",
         {{"type", "command"}, {"template", "cp " + dir.file("canned.jsonl") + " {out_jsonl}"}}},
        {"ground_truth", dir.file("gt.jsonl")},
        {"merge", true},
    };
    write_text(dir.file("run.json"), runcfg.dump());

    const RunResult result = run("pipeline --config " + dir.file("run.json"));
    CHECK(result.status == 0);
    CHECK(std::filesystem::exists(dir.file("run/composite.pfm")));
    CHECK(std::filesystem::exists(dir.file("run/tile.pgm")));
    CHECK(std::filesystem::exists(dir.file("run/chips/T_0_0.pgm")));

    // the cross-chip duplicate must collapse to one detection that matches GT
    const auto cleaned = json::parse(testutil::slurp(dir.file("run/detections.geojson")));
    CHECK(cleaned["features"].size() == 1);
    const auto report = json::parse(testutil::slurp(dir.file("run/report.json")));
    CHECK(report["merged"][0]["tp"] == 1);
    CHECK(report["merged"][0]["fp"] == 0);
    CHECK(report["merged"][0]["fn"] == 0);
}

TEST_CASE("cli: external detector command template") {
    testutil::TempDir dir("cli_ext");
    std::filesystem::create_directories(dir.file("bg"));
    opdet::io::write_pgm(testutil::speckle_sea(640, 640, 90), dir.file("bg/sea.pgm"));

    // canned external output: one fixed detection per chip, via a cp template
    json runcfg{
        {"workdir", dir.file("run")},
        {"seed", 3},
        {"verbosity", "quiet"},
        {"parallelism", 2},
        {"synth",
         {{"manifest", json{{"classes", json::array({json{{"class_id", 0}, {"target", 2}}})},
                            {"seed", 3}}},
          {"backgrounds", dir.file("bg")}}},
        {"detector",
         {{"type", "command"}, {"template", "cp " + dir.file("canned.jsonl") + " {out_jsonl}"}}},
    };
    write_text(dir.file("run.json"), runcfg.dump());

    // the canned file needs a valid chip id: run once with the oracle to learn
    // the scene name, then swap in the command detector
    json oracle_cfg = runcfg;
    oracle_cfg["detector"] = {{"type", "oracle"}, {"jitter_px", 0.0}};
    write_text(dir.file("oracle.json"), oracle_cfg.dump());
    REQUIRE(run("pipeline --config " + dir.file("oracle.json")).status == 0);
    const auto raw = opdet::io::read_detections_jsonl(dir.file("run/detections_raw.jsonl"));
    REQUIRE_FALSE(raw.empty());

    std::vector<opdet::Detection> canned(1);
    canned[0].chip_id = raw[0].chip_id;
    canned[0].cls = opdet::ObjectClass::SinglePlatform;
    canned[0].confidence = 0.77;
    canned[0].box_px = raw[0].box_px;
    opdet::io::write_detections_jsonl(canned, dir.file("canned.jsonl"));

    const RunResult result = run("pipeline --config " + dir.file("run.json"));
    CHECK(result.status == 0);
    CHECK(result.output.find("pipeline:") == std::string::npos);  // quiet mode
    const auto cleaned = json::parse(testutil::slurp(dir.file("run/detections.geojson")));
    CHECK(cleaned["features"].size() == 1);
    CHECK(cleaned["features"][0]["properties"]["confidence"] == 0.77);
}
