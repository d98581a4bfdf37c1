#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opdet/core/config.hpp"
#include "opdet/core/types.hpp"
#include "opdet/evaluate/evaluate.hpp"
#include "opdet/evaluate/oracle.hpp"
#include "opdet/evaluate/report.hpp"
#include "opdet/io/chips.hpp"
#include "opdet/io/raster_io.hpp"
#include "opdet/io/records.hpp"
#include "opdet/postprocess/geojson.hpp"
#include "opdet/postprocess/postprocess.hpp"
#include "opdet/preprocess/preprocess.hpp"
#include "opdet/synthgen/generator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Usage or configuration problem: exit code 2 (data errors exit 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool g_quiet = false;

template <typename... Args>
void logf(const char* fmt, Args... args) {
    if (!g_quiet) std::printf(fmt, args...);
}

void require_exists(const std::string& path, const char* what) {
    if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

opdet::PipelineConfig load_config(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("OPDET_CONFIG")) path = env;
    }
    if (path.empty()) return {};
    require_exists(path, "config file");
    try {
        return opdet::PipelineConfig::load(path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
}

std::vector<std::string> sorted_files(const std::string& dir, const std::string& ext) {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ext) out.push_back(entry.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

opdet::GeoTransform geotransform_from_json(const json& j) {
    const json& g = j.is_array() ? j : j.at("geotransform");
    if (!g.is_array() || g.size() != 6)
        throw ConfigError("geotransform must be an array of 6 coefficients");
    return {g[0].get<double>(), g[1].get<double>(), g[2].get<double>(),
            g[3].get<double>(), g[4].get<double>(), g[5].get<double>()};
}

opdet::GeoTransform read_geotransform_file(const std::string& path) {
    require_exists(path, "geotransform file");
    std::ifstream in(path);
    json j;
    in >> j;
    return geotransform_from_json(j);
}

/// Backgrounds directory: "{stem}.pgm" scenes, optional "{stem}.land.pgm"
/// land masks (absent mask = open sea).
std::vector<opdet::synthgen::Background> load_backgrounds(const std::string& dir,
                                                          const opdet::PipelineConfig& cfg) {
    require_exists(dir, "backgrounds directory");
    std::vector<opdet::synthgen::Background> out;
    for (const auto& path : sorted_files(dir, ".pgm")) {
        if (path.ends_with(".land.pgm")) continue;
        opdet::synthgen::Background bg;
        bg.raster = opdet::io::read_pgm(path);
        const std::string mask_path = path.substr(0, path.size() - 4) + ".land.pgm";
        opdet::Raster8 mask;
        if (fs::exists(mask_path)) {
            mask = opdet::io::read_pgm(mask_path);
        } else {
            mask = opdet::Raster8::filled(bg.raster.width, bg.raster.height, 0);
        }
        bg.entities = opdet::synthgen::build_entity_map(mask, cfg);
        out.push_back(std::move(bg));
    }
    if (out.empty()) throw ConfigError("no .pgm backgrounds in: " + dir);
    return out;
}

std::array<double, 4> parse_bounds(const std::string& csv) {
    std::array<double, 4> v{};
    if (std::sscanf(csv.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
        throw ConfigError("expected x0,y0,x1,y1 but got: " + csv);
    return v;
}

std::array<int, 3> parse_counts(const std::string& csv) {
    std::array<int, 3> v{};
    if (std::sscanf(csv.c_str(), "%d,%d,%d", &v[0], &v[1], &v[2]) != 3)
        throw ConfigError("expected three comma-separated counts but got: " + csv);
    return v;
}

// ---------------------------------------------------------------------------
// stage commands

int cmd_composite(const std::string& stack_dir, const std::string& out,
                  const opdet::PipelineConfig&) {
    require_exists(stack_dir, "stack directory");
    const auto files = sorted_files(stack_dir, ".pfm");
    if (files.empty()) throw ConfigError("no .pfm rasters in: " + stack_dir);
    std::vector<opdet::RasterF> stack;
    stack.reserve(files.size());
    for (const auto& f : files) stack.push_back(opdet::io::read_pfm(f));
    opdet::io::write_pfm(opdet::preprocess::median_composite(stack), out);
    logf("composite: %zu scenes -> %s\n", stack.size(), out.c_str());
    return 0;
}

int cmd_quantize(const std::string& in, const std::string& out,
                 const opdet::PipelineConfig& cfg) {
    require_exists(in, "input raster");
    opdet::io::write_pgm(opdet::preprocess::quantize_db(opdet::io::read_pfm(in), cfg), out);
    logf("quantize: %s -> %s\n", in.c_str(), out.c_str());
    return 0;
}

int cmd_grid(const std::string& roi, const std::string& out, double lon0, double lat0,
             const opdet::PipelineConfig& cfg) {
    const auto tiles = opdet::preprocess::make_grid(parse_bounds(roi), cfg, {lon0, lat0});
    json jt = json::array();
    for (const auto& t : tiles) {
        jt.push_back({{"tile_id", t.tile_id},
                      {"bounds_m", t.bounds_m},
                      {"geotransform",
                       {t.geotransform.a, t.geotransform.b, t.geotransform.c, t.geotransform.d,
                        t.geotransform.e, t.geotransform.f}},
                      {"crs", opdet::GeoTransform::kCrs}});
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << json{{"tiles", jt}}.dump(2) << "\n";
    logf("grid: %zu tiles -> %s\n", tiles.size(), out.c_str());
    return 0;
}

int cmd_chip(const std::string& in, const std::string& gt_path, const std::string& out_dir,
             const std::string& tile_id, const opdet::PipelineConfig& cfg) {
    require_exists(in, "input raster");
    const opdet::Raster8 raster = opdet::io::read_pgm(in);
    const opdet::GeoTransform gt = read_geotransform_file(gt_path);
    const auto chips = opdet::preprocess::chip_tile(raster, gt, tile_id, cfg);
    for (const auto& c : chips) {
        opdet::io::ChipRecord rec{c.chip_id, tile_id, c.offset_px, c.geotransform, c.raster};
        opdet::io::write_chip(rec, out_dir);
    }
    logf("chip: %zu chips -> %s\n", chips.size(), out_dir.c_str());
    return 0;
}

int cmd_balance(const std::string& real_csv, const std::string& target_csv, std::uint64_t seed,
                const std::string& out) {
    const auto m = opdet::synthgen::balance_manifest(parse_counts(real_csv),
                                                     parse_counts(target_csv), seed);
    opdet::synthgen::write_manifest(m, out);
    for (int c = 0; c < 3; ++c) {
        std::printf("%-18s real %5d  target %5d  synthetic %5d\n",
                    opdet::class_name(opdet::class_from_id(c)), m.real[c], m.target[c],
                    m.synthetic[c]);
    }
    return 0;
}

int cmd_synth(const std::string& manifest_path, const std::string& backgrounds_dir,
              const std::string& out_dir, std::uint64_t seed, bool seed_given, int spacing,
              const opdet::PipelineConfig& cfg) {
    require_exists(manifest_path, "manifest");
    opdet::synthgen::GenerationManifest manifest = opdet::synthgen::read_manifest(manifest_path);
    if (seed_given) manifest.seed = seed;
    const auto backgrounds = load_backgrounds(backgrounds_dir, cfg);
    opdet::synthgen::SynthParams params;
    params.anchor_spacing_px = spacing;
    const auto outputs =
        opdet::synthgen::generate_dataset(manifest, backgrounds, cfg, params, out_dir);
    int objects = 0;
    for (const auto& o : outputs) objects += o.n_objects;
    logf("synth: %zu scenes, %d objects -> %s\n", outputs.size(), objects, out_dir.c_str());
    return 0;
}

int cmd_oracle(const std::string& labels_dir, double jitter, double dropout, double spurious,
               std::uint64_t seed, const std::string& out, const opdet::PipelineConfig& cfg) {
    require_exists(labels_dir, "labels directory");
    opdet::evaluate::OracleParams params{jitter, dropout, spurious, seed};
    opdet::evaluate::oracle_detect_dir(labels_dir, params, cfg, out);
    logf("oracle-detect: %s -> %s\n", labels_dir.c_str(), out.c_str());
    return 0;
}

int cmd_postprocess(const std::string& dets_path, const std::string& chips_dir,
                    const std::string& out, const opdet::PipelineConfig& cfg) {
    require_exists(dets_path, "detections file");
    require_exists(chips_dir, "chips directory");
    const auto dets = opdet::io::read_detections_jsonl(dets_path);
    const auto chips = opdet::io::ChipStore::load_dir(chips_dir);
    const auto cleaned = opdet::postprocess::postprocess_run(dets, chips, cfg);
    opdet::postprocess::write_geojson(cleaned, out);
    logf("postprocess: %zu raw -> %zu cleaned -> %s\n", dets.size(), cleaned.size(),
                out.c_str());
    return 0;
}

std::vector<opdet::Detection> load_predictions(const std::string& path) {
    require_exists(path, "predictions file");
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".jsonl") {
        auto dets = opdet::io::read_detections_jsonl(path);
        for (std::size_t i = 0; i < dets.size(); ++i) dets[i].id = i;
        return dets;
    }
    return opdet::postprocess::read_geojson(path);
}

int cmd_evaluate(const std::string& preds_path, const std::string& gt_path, bool merge,
                 const std::string& report_path, const opdet::PipelineConfig& cfg) {
    require_exists(gt_path, "ground truth file");
    const auto preds = load_predictions(preds_path);
    const auto gts = opdet::io::read_ground_truth_jsonl(gt_path);
    const auto raw = opdet::evaluate::evaluate_run(preds, gts, cfg, false);
    const auto merged = opdet::evaluate::evaluate_run(preds, gts, cfg, true);
    const json report = opdet::evaluate::make_report_json(raw, merged, cfg);
    if (!report_path.empty()) opdet::evaluate::write_report(report, report_path);

    json shown = report;
    if (!merge) shown.erase("merged");
    std::fputs(opdet::evaluate::render_table(shown).c_str(), stdout);
    const auto total = opdet::evaluate::micro_tally(merge ? merged.report : raw.report);
    const auto mm = opdet::evaluate::Metrics::from_counts(total.tp, total.fp, total.fn);
    std::printf("overall%s: Pr %.2f Rc %.2f F1 %.2f\n", merge ? " (merged)" : "", mm.precision,
                mm.recall, mm.f1);
    return 0;
}

int cmd_report(const std::string& report_path) {
    require_exists(report_path, "report file");
    json report;
    try {
        report = opdet::evaluate::read_report(report_path);
        std::fputs(opdet::evaluate::render_table(report).c_str(), stdout);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// end-to-end pipeline

opdet::GeoTransform scene_geotransform(int index, const opdet::Raster8& raster) {
    // scenes laid out on a 0.1 degree grid, 1e-4 degrees per pixel: footprints
    // stay disjoint, so cross-chip duplicates cannot arise between scenes
    const double lon0 = 0.1 * (index % 100);
    const double lat0 = 0.1 * (index / 100);
    return {lon0, 1e-4, 0.0, lat0 + 1e-4 * raster.height, 0.0, -1e-4};
}

void run_detector(const json& detector, const std::string& chips_dir,
                  const std::string& labels_dir, const std::string& out_jsonl,
                  std::uint64_t seed, const opdet::PipelineConfig& cfg) {
    const std::string type = detector.value("type", std::string{"oracle"});
    if (type == "oracle") {
        if (labels_dir.empty())
            throw ConfigError("oracle detector requires per-chip labels");
        opdet::evaluate::OracleParams params;
        params.jitter_sigma_px = detector.value("jitter_px", 0.0);
        params.dropout_rate = detector.value("dropout", 0.0);
        params.spurious_rate = detector.value("spurious", 0.0);
        params.seed = detector.value("seed", seed);
        opdet::evaluate::oracle_detect_dir(labels_dir, params, cfg, out_jsonl);
        return;
    }
    if (type == "command") {
        std::string cmd = detector.at("template").get<std::string>();
        auto substitute = [&cmd](const std::string& key, const std::string& value) {
            for (std::size_t pos = cmd.find(key); pos != std::string::npos;
                 pos = cmd.find(key, pos)) {
                cmd.replace(pos, key.size(), value);
                pos += value.size();
            }
        };
        substitute("{chips_dir}", chips_dir);
        substitute("{out_jsonl}", out_jsonl);
        logf("detector: %s\n", cmd.c_str());
        const int rc = std::system(cmd.c_str());
        if (rc != 0) throw std::runtime_error("external detector failed with status " +
                                              std::to_string(rc));
        return;
    }
    throw ConfigError("unknown detector type: " + type);
}

int cmd_pipeline(const std::string& run_config_path, const std::string& workdir_override,
                 std::uint64_t seed_override, bool seed_given) {
    require_exists(run_config_path, "pipeline config");
    std::ifstream in(run_config_path);
    json run;
    try {
        in >> run;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad pipeline config: ") + e.what());
    }

    const std::string workdir =
        !workdir_override.empty() ? workdir_override : run.value("workdir", std::string{"."});
    fs::create_directories(workdir);
    const std::uint64_t seed = seed_given ? seed_override : run.value("seed", std::uint64_t{0});
    // stages execute serially; per-scene/per-chip rng streams already make any
    // parallel schedule produce identical bytes, so degree 1..n are equivalent
    const int parallelism = run.value("parallelism", 1);
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    const std::string verbosity = run.value("verbosity", std::string{"info"});
    if (verbosity != "info" && verbosity != "quiet")
        throw ConfigError("verbosity must be 'info' or 'quiet'");
    g_quiet = verbosity == "quiet";
    const opdet::PipelineConfig cfg =
        run.contains("config") ? opdet::PipelineConfig::from_json(run.at("config"))
                               : opdet::PipelineConfig{};

    const std::string chips_dir = (fs::path(workdir) / "chips").string();
    std::string labels_dir;
    std::string gt_path = run.value("ground_truth", std::string{});

    if (run.contains("synth")) {
        // synthetic closed loop: generated scenes double as chips
        const json& synth = run.at("synth");
        opdet::synthgen::GenerationManifest manifest;
        if (synth.at("manifest").is_string()) {
            const std::string mpath = synth.at("manifest").get<std::string>();
            require_exists(mpath, "manifest");
            manifest = opdet::synthgen::read_manifest(mpath);
        } else {
            std::array<int, 3> real{}, target{};
            for (const auto& c : synth.at("manifest").at("classes")) {
                const int id = c.at("class_id").get<int>();
                real.at(id) = c.value("real", 0);
                target.at(id) = c.at("target").get<int>();
            }
            manifest = opdet::synthgen::balance_manifest(real, target, seed);
        }
        manifest.seed = seed;
        const auto backgrounds = load_backgrounds(synth.at("backgrounds").get<std::string>(), cfg);
        opdet::synthgen::SynthParams params;
        if (synth.contains("anchor_spacing_px"))
            params.anchor_spacing_px = synth.at("anchor_spacing_px").get<int>();
        const std::string scenes_dir = (fs::path(workdir) / "scenes").string();
        const auto scenes =
            opdet::synthgen::generate_dataset(manifest, backgrounds, cfg, params, scenes_dir);
        logf("pipeline: generated %zu scenes\n", scenes.size());
        labels_dir = scenes_dir;

        std::vector<opdet::io::GroundTruth> gts;
        for (std::size_t i = 0; i < scenes.size(); ++i) {
            const opdet::Raster8 raster = opdet::io::read_pgm(scenes[i].image_path);
            const std::string chip_id = fs::path(scenes[i].image_path).stem().string();
            const opdet::GeoTransform gt = scene_geotransform(static_cast<int>(i), raster);
            opdet::io::ChipRecord rec{chip_id, "synth", {0, 0}, gt, raster};
            opdet::io::write_chip(rec, chips_dir);
            for (const auto& label : opdet::io::read_labels(scenes[i].label_path)) {
                const opdet::GeoBBox g = opdet::geolocate(
                    label.box_px(raster.width, raster.height), gt);
                opdet::io::GroundTruth entry;
                entry.x0 = g.lon_min;
                entry.y0 = g.lat_min;
                entry.x1 = g.lon_max;
                entry.y1 = g.lat_max;
                entry.cls = label.cls;
                entry.region = "synthetic";
                entry.frame = opdet::io::Frame::Geo;
                entry.chip_id = chip_id;
                gts.push_back(entry);
            }
        }
        gt_path = (fs::path(workdir) / "gt.jsonl").string();
        opdet::io::write_ground_truth_jsonl(gts, gt_path);
    } else if (run.contains("input")) {
        const json& input = run.at("input");
        const std::string stack_dir = input.at("stack").get<std::string>();
        const std::string composite_path = (fs::path(workdir) / "composite.pfm").string();
        cmd_composite(stack_dir, composite_path, cfg);
        const std::string tile_path = (fs::path(workdir) / "tile.pgm").string();
        cmd_quantize(composite_path, tile_path, cfg);
        const opdet::Raster8 tile = opdet::io::read_pgm(tile_path);
        const opdet::GeoTransform gt = geotransform_from_json(input.at("geotransform"));
        const std::string tile_id = input.value("tile_id", std::string{"tile"});
        for (const auto& c : opdet::preprocess::chip_tile(tile, gt, tile_id, cfg)) {
            opdet::io::ChipRecord rec{c.chip_id, tile_id, c.offset_px, c.geotransform, c.raster};
            opdet::io::write_chip(rec, chips_dir);
        }
        labels_dir = run.value("labels", std::string{});
    } else {
        throw ConfigError("pipeline config needs either a 'synth' or an 'input' section");
    }

    const std::string dets_path = (fs::path(workdir) / "detections_raw.jsonl").string();
    run_detector(run.value("detector", json{{"type", "oracle"}}), chips_dir, labels_dir,
                 dets_path, seed, cfg);

    const std::string geojson_path = (fs::path(workdir) / "detections.geojson").string();
    cmd_postprocess(dets_path, chips_dir, geojson_path, cfg);

    if (!gt_path.empty()) {
        const bool merge = run.value("merge", true);
        const std::string report_path = (fs::path(workdir) / "report.json").string();
        cmd_evaluate(geojson_path, gt_path, merge, report_path, cfg);
        logf("pipeline: report written to %s\n", report_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offshore platform detection pipeline tools"};
    app.require_subcommand(1);

    std::string cfg_path, stack_dir, in_path, out_path, gt_path, roi, tile_id{"tile"};
    std::string manifest_path, backgrounds_dir, labels_dir, dets_path, chips_dir, preds_path;
    std::string report_path, real_csv, target_csv, run_config, workdir;
    double lon0 = 0.0, lat0 = 0.0, jitter = 0.0, dropout = 0.0, spurious = 0.0;
    std::uint64_t seed = 0;
    int spacing = 96;
    bool merge = false;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", cfg_path, "pipeline config JSON (overrides defaults)");
    };

    auto* composite = app.add_subcommand("composite", "median-composite a stack of dB rasters");
    composite->add_option("--stack", stack_dir, "directory of .pfm rasters")->required();
    composite->add_option("--out", out_path, "output .pfm")->required();
    add_config(composite);

    auto* quantize = app.add_subcommand("quantize", "map dB raster to 8-bit");
    quantize->add_option("--in", in_path, "input .pfm")->required();
    quantize->add_option("--out", out_path, "output .pgm")->required();
    add_config(quantize);

    auto* grid = app.add_subcommand("grid", "build the overlapping tile grid for a planar ROI");
    grid->add_option("--roi", roi, "ROI bounds x0,y0,x1,y1 in meters")->required();
    grid->add_option("--out", out_path, "output tiles JSON")->required();
    grid->add_option("--origin-lon", lon0, "geographic anchor longitude");
    grid->add_option("--origin-lat", lat0, "geographic anchor latitude");
    add_config(grid);

    auto* chip = app.add_subcommand("chip", "cut a tile raster into overlapping chips");
    chip->add_option("--in", in_path, "input tile .pgm")->required();
    chip->add_option("--gt", gt_path, "tile geotransform JSON")->required();
    chip->add_option("--out", out_path, "output chip directory")->required();
    chip->add_option("--tile-id", tile_id, "tile identifier");
    add_config(chip);

    auto* balance = app.add_subcommand("balance", "compute the class-balancing manifest");
    balance->add_option("--real", real_csv, "real counts s,c,t")->required();
    balance->add_option("--target", target_csv, "target counts s,c,t")->required();
    balance->add_option("--seed", seed, "generation seed");
    balance->add_option("--out", out_path, "output manifest JSON")->required();

    auto* synth = app.add_subcommand("synth", "generate synthetic image-label pairs");
    synth->add_option("--manifest", manifest_path, "manifest JSON")->required();
    synth->add_option("--backgrounds", backgrounds_dir, "background scene directory")->required();
    synth->add_option("--out", out_path, "output directory")->required();
    auto* synth_seed = synth->add_option("--seed", seed, "override manifest seed");
    synth->add_option("--spacing", spacing, "anchor grid spacing (px)");
    add_config(synth);

    auto* oracle = app.add_subcommand("oracle-detect", "derive detections from labels with noise");
    oracle->add_option("--labels", labels_dir, "directory of .pgm/.txt pairs")->required();
    oracle->add_option("--jitter", jitter, "corner jitter sigma (px)");
    oracle->add_option("--dropout", dropout, "label dropout rate");
    oracle->add_option("--spurious", spurious, "spurious box rate");
    oracle->add_option("--seed", seed, "rng seed");
    oracle->add_option("--out", out_path, "output detections JSONL")->required();
    add_config(oracle);

    auto* post = app.add_subcommand("postprocess", "merge chip detections into a clean set");
    post->add_option("--dets", dets_path, "raw detections JSONL")->required();
    post->add_option("--chips", chips_dir, "chip directory")->required();
    post->add_option("--out", out_path, "output GeoJSON")->required();
    add_config(post);

    auto* evaluate = app.add_subcommand("evaluate", "score detections against ground truth");
    evaluate->add_option("--preds", preds_path, "predictions (.geojson or .jsonl)")->required();
    evaluate->add_option("--gt", gt_path, "ground truth JSONL")->required();
    evaluate->add_flag("--merge", merge, "report the unified platform class");
    evaluate->add_option("--report", report_path, "output report JSON");
    add_config(evaluate);

    auto* report = app.add_subcommand("report", "render a report JSON as a text table");
    report->add_option("--report", report_path, "report JSON")->required();

    auto* pipeline = app.add_subcommand("pipeline", "run the full detection pipeline");
    pipeline->add_option("--config", run_config, "pipeline run config JSON");
    pipeline->add_option("--workdir", workdir, "override workdir");
    auto* pipe_seed = pipeline->add_option("--seed", seed, "override seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (composite->parsed()) return cmd_composite(stack_dir, out_path, load_config(cfg_path));
        if (quantize->parsed()) return cmd_quantize(in_path, out_path, load_config(cfg_path));
        if (grid->parsed()) return cmd_grid(roi, out_path, lon0, lat0, load_config(cfg_path));
        if (chip->parsed())
            return cmd_chip(in_path, gt_path, out_path, tile_id, load_config(cfg_path));
        if (balance->parsed()) return cmd_balance(real_csv, target_csv, seed, out_path);
        if (synth->parsed())
            return cmd_synth(manifest_path, backgrounds_dir, out_path, seed,
                             synth_seed->count() > 0, spacing, load_config(cfg_path));
        if (oracle->parsed())
            return cmd_oracle(labels_dir, jitter, dropout, spurious, seed, out_path,
                              load_config(cfg_path));
        if (post->parsed())
            return cmd_postprocess(dets_path, chips_dir, out_path, load_config(cfg_path));
        if (evaluate->parsed())
            return cmd_evaluate(preds_path, gt_path, merge, report_path, load_config(cfg_path));
        if (report->parsed()) return cmd_report(report_path);
        if (pipeline->parsed()) {
            std::string path = run_config;
            if (path.empty()) {
                if (const char* env = std::getenv("OPDET_CONFIG")) path = env;
            }
            if (path.empty()) throw ConfigError("pipeline needs --config (or OPDET_CONFIG)");
            return cmd_pipeline(path, workdir, seed, pipe_seed->count() > 0);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
