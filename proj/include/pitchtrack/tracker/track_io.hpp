#ifndef PITCHTRACK_TRACKER_TRACK_IO_HPP
#define PITCHTRACK_TRACKER_TRACK_IO_HPP

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "../core/classes.hpp"
#include "../core/jsonl.hpp"
#include "byte_tracker.hpp"

namespace pitchtrack {

/// One line of the track output stream.
struct TrackRow {
    FrameIndex frame = 0;
    int track_id = 0;
    ClassLabel cls = ClassLabel::player;
    std::optional<int> team;
    double score = 0;
    BoundingBox box;

    friend bool operator==(const TrackRow&, const TrackRow&) = default;
};

/// Flattens confirmed tracks into rows ordered by (frame, track id).
inline std::vector<TrackRow> track_rows(const std::vector<TrackRecord>& tracks) {
    std::vector<TrackRow> rows;
    for (const auto& t : tracks) {
        if (!t.confirmed) {
            continue;
        }
        for (const auto& h : t.history) {
            rows.push_back({h.frame, t.id, t.cls, t.team, h.score, h.box});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const TrackRow& a, const TrackRow& b) {
        return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id);
    });
    return rows;
}

inline void write_track_row(std::ostream& out, const TrackRow& r, const ClassMap& classes = {}) {
    jsonl::OrderedJson obj;
    obj["frame"] = r.frame;
    obj["track_id"] = r.track_id;
    obj["class_id"] = classes.id_of(r.cls);
    obj["team"] = r.team ? jsonl::OrderedJson(*r.team) : jsonl::OrderedJson(nullptr);
    obj["score"] = r.score;
    obj["bbox"] = jsonl::box_json(r.box);
    out << obj.dump() << '\n';
}

inline void write_track_rows(std::ostream& out, const std::vector<TrackRow>& rows, const ClassMap& classes = {}) {
    for (const auto& r : rows) {
        write_track_row(out, r, classes);
    }
}

/// Same columns as the line-delimited form, with the box split into x1..y2.
inline void write_track_rows_csv(std::ostream& out, const std::vector<TrackRow>& rows,
                                 const ClassMap& classes = {}) {
    auto num = [](double d) { return jsonl::Json(d).dump(); };
    out << "frame,track_id,class_id,team,score,x1,y1,x2,y2\n";
    for (const auto& r : rows) {
        out << r.frame << ',' << r.track_id << ',' << classes.id_of(r.cls) << ','
            << (r.team ? std::to_string(*r.team) : std::string{}) << ',' << num(r.score) << ',' << num(r.box.x1)
            << ',' << num(r.box.y1) << ',' << num(r.box.x2) << ',' << num(r.box.y2) << '\n';
    }
}

inline std::vector<TrackRow> parse_track_rows(std::istream& in, const ClassMap& classes = {},
                                              const std::string& provenance = "tracks") {
    std::vector<TrackRow> rows;
    jsonl::for_each_record(
        in, provenance, {"frame", "track_id", "class_id", "team", "score", "bbox"},
        [&](std::size_t line, const jsonl::Json& obj) {
            TrackRow r;
            r.frame = jsonl::get_int(obj, "frame", line, provenance);
            if (r.frame < 0) {
                throw ValidationError(line, provenance, "frame", "must be non-negative");
            }
            r.track_id = static_cast<int>(jsonl::get_int(obj, "track_id", line, provenance));
            if (r.track_id < 1) {
                throw ValidationError(line, provenance, "track_id", "must be positive");
            }
            const auto cls_id = jsonl::get_int(obj, "class_id", line, provenance);
            const auto cls = classes.label_of(static_cast<int>(cls_id));
            if (!cls) {
                throw ValidationError(line, provenance, "class_id", "unknown class id " + std::to_string(cls_id));
            }
            r.cls = *cls;
            const auto& team = obj.at("team");
            if (!team.is_null()) {
                const auto t = jsonl::get_int(obj, "team", line, provenance);
                if (t != 0 && t != 1) {
                    throw ValidationError(line, provenance, "team", "must be 0, 1 or null");
                }
                r.team = static_cast<int>(t);
            }
            r.score = jsonl::get_number(obj.at("score"), "score", line, provenance);
            if (r.score < 0 || r.score > 1) {
                throw ValidationError(line, provenance, "score", "must lie in [0, 1]");
            }
            r.box = jsonl::get_box(obj, line, provenance);
            if (!rows.empty() && r.frame < rows.back().frame) {
                throw ValidationError(line, provenance, "frame", "frame indices must be non-decreasing");
            }
            rows.push_back(r);
        });
    return rows;
}

} // namespace pitchtrack

#endif
