#include "opdet/core/config.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opdet {

void PipelineConfig::validate() const {
    if (!(db_lo < db_hi)) throw std::invalid_argument("config: db_lo must be < db_hi");
    if (chip_size < 1) throw std::invalid_argument("config: chip_size must be >= 1");
    if (!(chip_overlap >= 0.0 && chip_overlap < 1.0))
        throw std::invalid_argument("config: chip_overlap must be in [0,1)");
    if (!(grid_step_m > 0.0)) throw std::invalid_argument("config: grid_step_m must be > 0");
    if (!(grid_tile_m >= grid_step_m))
        throw std::invalid_argument("config: grid_tile_m must be >= grid_step_m");
    if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0))
        throw std::invalid_argument("config: conf_threshold must be in [0,1]");
    if (dark_pixel_threshold < 0 || dark_pixel_threshold > 255)
        throw std::invalid_argument("config: dark_pixel_threshold must be in [0,255]");
    if (!(dedup_iou >= 0.0 && dedup_iou <= 1.0))
        throw std::invalid_argument("config: dedup_iou must be in [0,1]");
    if (!(eval_iou >= 0.0 && eval_iou <= 1.0))
        throw std::invalid_argument("config: eval_iou must be in [0,1]");
    if (!(coast_buffer_m >= 0.0)) throw std::invalid_argument("config: coast_buffer_m must be >= 0");
    if (!(pixel_size_m > 0.0)) throw std::invalid_argument("config: pixel_size_m must be > 0");
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
    PipelineConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("db_lo", c.db_lo);
    get("db_hi", c.db_hi);
    get("chip_size", c.chip_size);
    get("chip_overlap", c.chip_overlap);
    get("grid_step_m", c.grid_step_m);
    get("grid_tile_m", c.grid_tile_m);
    get("conf_threshold", c.conf_threshold);
    get("dark_pixel_threshold", c.dark_pixel_threshold);
    get("dedup_iou", c.dedup_iou);
    get("eval_iou", c.eval_iou);
    get("coast_buffer_m", c.coast_buffer_m);
    get("pixel_size_m", c.pixel_size_m);
    c.validate();
    return c;
}

nlohmann::json PipelineConfig::to_json() const {
    return nlohmann::json{
        {"db_lo", db_lo},
        {"db_hi", db_hi},
        {"chip_size", chip_size},
        {"chip_overlap", chip_overlap},
        {"grid_step_m", grid_step_m},
        {"grid_tile_m", grid_tile_m},
        {"conf_threshold", conf_threshold},
        {"dark_pixel_threshold", dark_pixel_threshold},
        {"dedup_iou", dedup_iou},
        {"eval_iou", eval_iou},
        {"coast_buffer_m", coast_buffer_m},
        {"pixel_size_m", pixel_size_m},
    };
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

}  // namespace opdet
