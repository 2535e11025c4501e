#ifndef PITCHTRACK_EVAL_REPORT_HPP
#define PITCHTRACK_EVAL_REPORT_HPP

#include <cctype>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "../core/jsonl.hpp"
#include "metrics.hpp"

namespace pitchtrack {

struct ReportRow {
    std::string name;
    std::size_t images = 0;
    std::size_t instances = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> map50;
    std::optional<double> map5095;
};

/// "All" row first, then one row per class in label order.
struct EvalReport {
    std::vector<ReportRow> rows;
};

struct EvalOptions {
    double score_threshold = 0.25;
    double iou_threshold = 0.5;
};

/**
 * Per-class detection report.
 *
 * Class rows with neither ground truth nor predictions are left undefined.
 * The "All" row counts every evaluated frame and instance and averages each
 * metric over the defined class rows.
 */
inline EvalReport build_report(std::span<const Detection> preds, std::span<const GroundTruthObject> gts,
                               const EvalOptions& opt = {}) {
    const auto sweep = map_over_thresholds(preds, gts);
    EvalReport report;
    ReportRow all;
    all.name = "All";
    std::set<FrameIndex> all_frames;
    for (const auto& p : preds) {
        all_frames.insert(p.frame);
    }
    double sums[4] = {0, 0, 0, 0};
    std::size_t defined = 0;
    for (auto cls : kAllClasses) {
        ReportRow row;
        row.name = class_title(cls);
        std::set<FrameIndex> frames;
        std::vector<Detection> cls_preds;
        std::vector<GroundTruthObject> cls_gts;
        for (const auto& g : gts) {
            all_frames.insert(g.frame);
            if (g.cls == cls) {
                frames.insert(g.frame);
                cls_gts.push_back(g);
            }
        }
        for (const auto& p : preds) {
            if (p.cls == cls) {
                cls_preds.push_back(p);
            }
        }
        row.images = frames.size();
        row.instances = cls_gts.size();
        const auto ci = class_index(cls);
        if (sweep.mean[ci]) {
            const auto pr = precision_recall_point(cls_preds, cls_gts, opt.iou_threshold, opt.score_threshold);
            row.precision = pr.precision;
            row.recall = pr.recall;
            row.map50 = class_average_precision(preds, gts, cls, opt.iou_threshold);
            row.map5095 = sweep.mean[ci];
            sums[0] += *row.precision;
            sums[1] += *row.recall;
            sums[2] += *row.map50;
            sums[3] += *row.map5095;
            ++defined;
        }
        all.instances += row.instances;
        report.rows.push_back(row);
    }
    all.images = all_frames.size();
    if (defined > 0) {
        const double d = static_cast<double>(defined);
        all.precision = sums[0] / d;
        all.recall = sums[1] / d;
        all.map50 = sums[2] / d;
        all.map5095 = sums[3] / d;
    }
    report.rows.insert(report.rows.begin(), all);
    return report;
}

inline std::string report_header() {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%12s%11s%11s%11s%11s%11s%11s", "Class", "Images", "Instances", "Precision",
                  "Recall", "mAP50", "mAP50-95");
    return buf;
}

inline std::string format_report_row(const ReportRow& r) {
    auto metric = [](const std::optional<double>& v) {
        char b[32];
        if (v) {
            std::snprintf(b, sizeof(b), "%11.3f", *v);
        } else {
            std::snprintf(b, sizeof(b), "%11s", "-");
        }
        return std::string(b);
    };
    char head[64];
    std::snprintf(head, sizeof(head), "%12s%11zu%11zu", r.name.c_str(), r.images, r.instances);
    return head + metric(r.precision) + metric(r.recall) + metric(r.map50) + metric(r.map5095);
}

/// Plain-text table with one line per row.
inline std::string render_report_table(const EvalReport& report) {
    std::string out = report_header() + "\n";
    for (const auto& r : report.rows) {
        out += format_report_row(r) + "\n";
    }
    return out;
}

/// `{"class", "images", "instances", "precision", "recall", "map50", "map5095"}` per row.
inline void write_report_records(std::ostream& out, const EvalReport& report) {
    auto opt = [](const std::optional<double>& v) {
        return v ? jsonl::OrderedJson(*v) : jsonl::OrderedJson(nullptr);
    };
    for (const auto& r : report.rows) {
        jsonl::OrderedJson obj;
        std::string name = r.name;
        for (auto& ch : name) {
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        obj["class"] = name;
        obj["images"] = r.images;
        obj["instances"] = r.instances;
        obj["precision"] = opt(r.precision);
        obj["recall"] = opt(r.recall);
        obj["map50"] = opt(r.map50);
        obj["map5095"] = opt(r.map5095);
        out << obj.dump() << '\n';
    }
}

} // namespace pitchtrack

#endif
