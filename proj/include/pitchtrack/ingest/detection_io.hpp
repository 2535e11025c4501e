#ifndef PITCHTRACK_INGEST_DETECTION_IO_HPP
#define PITCHTRACK_INGEST_DETECTION_IO_HPP

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "../core/jsonl.hpp"

namespace pitchtrack {

/// Detections ordered by non-decreasing frame index.
struct DetectionStream {
    std::vector<Detection> detections;

    struct FrameGroup {
        FrameIndex frame;
        std::span<const Detection> detections;
    };

    /// Contiguous per-frame groups, in frame order.
    std::vector<FrameGroup> frames() const {
        std::vector<FrameGroup> out;
        std::size_t start = 0;
        while (start < detections.size()) {
            std::size_t end = start;
            while (end < detections.size() && detections[end].frame == detections[start].frame) {
                ++end;
            }
            out.push_back({detections[start].frame,
                           std::span<const Detection>(detections.data() + start, end - start)});
            start = end;
        }
        return out;
    }

    bool empty() const { return detections.empty(); }
    std::size_t size() const { return detections.size(); }

    friend bool operator==(const DetectionStream&, const DetectionStream&) = default;
};

/// Parses one detection record (already shape-checked) into a Detection.
inline Detection decode_detection(const jsonl::Json& obj, std::size_t line, const std::string& prov,
                                  const ClassMap& classes) {
    Detection d;
    d.frame = jsonl::get_int(obj, "frame", line, prov);
    if (d.frame < 0) {
        throw ValidationError(line, prov, "frame", "must be non-negative");
    }
    const auto cls_id = jsonl::get_int(obj, "class_id", line, prov);
    const auto cls = classes.label_of(static_cast<int>(cls_id));
    if (!cls) {
        throw ValidationError(line, prov, "class_id", "unknown class id " + std::to_string(cls_id));
    }
    d.cls = *cls;
    d.score = jsonl::get_number(obj.at("score"), "score", line, prov);
    if (d.score < 0 || d.score > 1) {
        throw ValidationError(line, prov, "score", "must lie in [0, 1]");
    }
    d.box = jsonl::get_box(obj, line, prov);
    return d;
}

/**
 * Reads a line-delimited detection stream.
 *
 * Each line is `{"frame": int, "class_id": int, "score": float, "bbox": [x1, y1, x2, y2]}`;
 * unknown fields are rejected and frame indices must be non-decreasing.
 */
inline DetectionStream parse_detections(std::istream& in, const ClassMap& classes = {},
                                        const std::string& provenance = "detections") {
    DetectionStream out;
    jsonl::for_each_record(in, provenance, {"frame", "class_id", "score", "bbox"},
                           [&](std::size_t line, const jsonl::Json& obj) {
                               auto d = decode_detection(obj, line, provenance, classes);
                               if (!out.detections.empty() && d.frame < out.detections.back().frame) {
                                   throw ValidationError(line, provenance, "frame",
                                                         "frame indices must be non-decreasing");
                               }
                               out.detections.push_back(d);
                           });
    return out;
}

inline void write_detection(std::ostream& out, const Detection& d, const ClassMap& classes = {}) {
    jsonl::OrderedJson obj;
    obj["frame"] = d.frame;
    obj["class_id"] = classes.id_of(d.cls);
    obj["score"] = d.score;
    obj["bbox"] = jsonl::box_json(d.box);
    out << obj.dump() << '\n';
}

inline void serialize_detections(std::ostream& out, const DetectionStream& stream, const ClassMap& classes = {}) {
    for (const auto& d : stream.detections) {
        write_detection(out, d, classes);
    }
}

} // namespace pitchtrack

#endif
