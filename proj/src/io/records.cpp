#include "opdet/io/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opdet::io {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

}  // namespace

std::string detections_to_jsonl(const std::vector<Detection>& dets) {
    std::string out;
    for (const auto& d : dets) {
        nlohmann::json j{
            {"chip_id", d.chip_id},
            {"class_id", class_id(d.cls)},
            {"conf", d.confidence},
            {"bbox_px", {d.box_px.x0, d.box_px.y0, d.box_px.x1, d.box_px.y1}},
        };
        out += j.dump();
        out += "\n";
    }
    return out;
}

std::vector<Detection> detections_from_jsonl(const std::string& text) {
    std::vector<Detection> dets;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("bad detection JSONL at line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        Detection d;
        d.chip_id = j.at("chip_id").get<std::string>();
        d.cls = class_from_id(j.at("class_id").get<int>());
        d.confidence = j.at("conf").get<double>();
        const auto& b = j.at("bbox_px");
        if (b.size() != 4)
            throw std::runtime_error("bbox_px must have 4 entries at line " + std::to_string(lineno));
        d.box_px = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        if (!d.box_px.valid())
            throw std::runtime_error("invalid bbox_px at line " + std::to_string(lineno));
        dets.push_back(std::move(d));
    }
    return dets;
}

void write_detections_jsonl(const std::vector<Detection>& dets, const std::string& path) {
    write_file(detections_to_jsonl(dets), path);
}

std::vector<Detection> read_detections_jsonl(const std::string& path) {
    return detections_from_jsonl(read_file(path));
}

std::vector<GroundTruth> read_ground_truth_jsonl(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<GroundTruth> gts;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("bad GT JSONL at line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
        GroundTruth g;
        const auto& b = j.at("bbox");
        if (b.size() != 4)
            throw std::runtime_error("bbox must have 4 entries at line " + std::to_string(lineno));
        g.x0 = b[0].get<double>();
        g.y0 = b[1].get<double>();
        g.x1 = b[2].get<double>();
        g.y1 = b[3].get<double>();
        g.cls = class_from_id(j.at("class_id").get<int>());
        g.region = j.value("region", std::string{});
        const std::string frame = j.value("frame", std::string{"geo"});
        if (frame == "geo") {
            g.frame = Frame::Geo;
        } else if (frame == "px") {
            g.frame = Frame::Pixel;
        } else {
            throw std::runtime_error("unknown frame '" + frame + "' at line " + std::to_string(lineno));
        }
        g.chip_id = j.value("chip_id", std::string{});
        gts.push_back(std::move(g));
    }
    return gts;
}

void write_ground_truth_jsonl(const std::vector<GroundTruth>& gts, const std::string& path) {
    std::string out;
    for (const auto& g : gts) {
        nlohmann::json j{
            {"bbox", {g.x0, g.y0, g.x1, g.y1}},
            {"class_id", class_id(g.cls)},
            {"region", g.region},
            {"frame", g.frame == Frame::Geo ? "geo" : "px"},
        };
        if (!g.chip_id.empty()) j["chip_id"] = g.chip_id;
        out += j.dump();
        out += "\n";
    }
    write_file(out, path);
}

std::string labels_to_text(const std::vector<Label>& labels) {
    std::string out;
    char buf[128];
    for (const auto& l : labels) {
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", class_id(l.cls), l.cx, l.cy,
                      l.w, l.h);
        out += buf;
    }
    return out;
}

std::vector<Label> labels_from_text(const std::string& text) {
    std::vector<Label> labels;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        int cls_id = 0;
        Label l;
        if (!(ls >> cls_id >> l.cx >> l.cy >> l.w >> l.h))
            throw std::runtime_error("malformed label line: " + line);
        l.cls = class_from_id(cls_id);
        labels.push_back(l);
    }
    return labels;
}

void write_labels(const std::vector<Label>& labels, const std::string& path) {
    write_file(labels_to_text(labels), path);
}

std::vector<Label> read_labels(const std::string& path) {
    return labels_from_text(read_file(path));
}

}  // namespace opdet::io
