#ifndef PITCHTRACK_INGEST_GROUND_TRUTH_IO_HPP
#define PITCHTRACK_INGEST_GROUND_TRUTH_IO_HPP

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "../core/jsonl.hpp"

namespace pitchtrack {

/// Reads `{"frame", "object_id", "class_id", "bbox"}` records.
inline std::vector<GroundTruthObject> parse_ground_truth(std::istream& in, const ClassMap& classes = {},
                                                         const std::string& provenance = "ground-truth") {
    std::vector<GroundTruthObject> out;
    jsonl::for_each_record(in, provenance, {"frame", "object_id", "class_id", "bbox"},
                           [&](std::size_t line, const jsonl::Json& obj) {
                               GroundTruthObject g;
                               g.frame = jsonl::get_int(obj, "frame", line, provenance);
                               if (g.frame < 0) {
                                   throw ValidationError(line, provenance, "frame", "must be non-negative");
                               }
                               g.object_id = static_cast<int>(jsonl::get_int(obj, "object_id", line, provenance));
                               const auto cls_id = jsonl::get_int(obj, "class_id", line, provenance);
                               const auto cls = classes.label_of(static_cast<int>(cls_id));
                               if (!cls) {
                                   throw ValidationError(line, provenance, "class_id",
                                                         "unknown class id " + std::to_string(cls_id));
                               }
                               g.cls = *cls;
                               g.box = jsonl::get_box(obj, line, provenance);
                               out.push_back(g);
                           });
    return out;
}

inline void write_ground_truth(std::ostream& out, const GroundTruthObject& g, const ClassMap& classes = {}) {
    jsonl::OrderedJson obj;
    obj["frame"] = g.frame;
    obj["object_id"] = g.object_id;
    obj["class_id"] = classes.id_of(g.cls);
    obj["bbox"] = jsonl::box_json(g.box);
    out << obj.dump() << '\n';
}

} // namespace pitchtrack

#endif
