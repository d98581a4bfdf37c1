#include "opdet/evaluate/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opdet::evaluate {

namespace {

nlohmann::json class_block(const MatchReport& report, const std::vector<Metrics>& metrics,
                           bool with_ids) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < report.tally.size(); ++i) {
        const ClassTally& t = report.tally[i];
        nlohmann::json row{
            {"name", class_name(t.cls)},   {"gt", t.gt},
            {"tp", t.tp},                  {"fp", t.fp},
            {"fn", t.fn},                  {"precision", metrics[i].precision},
            {"recall", metrics[i].recall}, {"f1", metrics[i].f1},
        };
        if (with_ids) row["class_id"] = class_id(t.cls);
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json confusion_block(const ConfusionMatrix& cm) {
    nlohmann::json names = nlohmann::json::array();
    for (ObjectClass c : cm.classes) names.push_back(class_name(c));
    return nlohmann::json{
        {"classes", names},
        {"counts", cm.counts},
        {"row_percent", cm.row_percent},
    };
}

}  // namespace

nlohmann::json make_report_json(const EvalResult& raw, const EvalResult& merged,
                                const PipelineConfig& cfg) {
    return nlohmann::json{
        {"classes", class_block(raw.report, raw.metrics, true)},
        {"merged", class_block(merged.report, merged.metrics, false)},
        {"confusion", confusion_block(raw.confusion)},
        {"confusion_merged", confusion_block(merged.confusion)},
        {"config", cfg.to_json()},
    };
}

void write_report(const nlohmann::json& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << report.dump(2) << "\n";
}

nlohmann::json read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return nlohmann::json::parse(ss.str());  // whole file must be one document
}

std::string render_table(const nlohmann::json& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-18s %7s %7s %7s %7s %4s %4s %4s\n", "Class", "GT", "TP",
                  "FP", "FN", "Pr", "Rc", "F1");
    out += line;

    auto emit_rows = [&](const nlohmann::json& rows, bool expect_ids) {
        for (const auto& row : rows) {
            if (expect_ids) {
                const int id = row.at("class_id").get<int>();
                if (id < 0 || id > 2)
                    throw std::runtime_error("unknown class id in report: " + std::to_string(id));
            }
            std::snprintf(line, sizeof(line), "%-18s %7d %7d %7d %7d %.2f %.2f %.2f\n",
                          row.at("name").get<std::string>().c_str(), row.at("gt").get<int>(),
                          row.at("tp").get<int>(), row.at("fp").get<int>(), row.at("fn").get<int>(),
                          row.at("precision").get<double>(), row.at("recall").get<double>(),
                          row.at("f1").get<double>());
            out += line;
        }
    };

    if (!report.contains("classes") || !report.at("classes").is_array())
        throw std::runtime_error("report lacks a class table");
    emit_rows(report.at("classes"), true);
    if (report.contains("merged") && !report.at("merged").empty()) {
        out += "-- merged --\n";
        emit_rows(report.at("merged"), false);
    }
    return out;
}

}  // namespace opdet::evaluate
