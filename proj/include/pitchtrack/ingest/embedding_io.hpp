#ifndef PITCHTRACK_INGEST_EMBEDDING_IO_HPP
#define PITCHTRACK_INGEST_EMBEDDING_IO_HPP

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "../core/detection.hpp"
#include "../core/jsonl.hpp"
#include "detection_io.hpp"

namespace pitchtrack {

/// Throws LinkError unless every embedding names an existing detection.
inline void link_embeddings(const std::vector<Embedding>& embeddings, const DetectionStream& stream) {
    std::map<FrameIndex, std::size_t> per_frame;
    for (const auto& g : stream.frames()) {
        per_frame[g.frame] = g.detections.size();
    }
    for (const auto& e : embeddings) {
        auto it = per_frame.find(e.frame);
        if (it == per_frame.end() || e.det_index >= it->second) {
            throw LinkError("embedding references detection " + std::to_string(e.det_index) + " of frame " +
                            std::to_string(e.frame) + ", which does not exist");
        }
    }
}

/**
 * Reads `{"frame": int, "det_index": int, "vec": [512 floats]}` records.
 *
 * When `detections` is given, references are resolved against it.
 */
inline std::vector<Embedding> parse_embeddings(std::istream& in, const DetectionStream* detections = nullptr,
                                               const std::string& provenance = "embeddings") {
    std::vector<Embedding> out;
    jsonl::for_each_record(in, provenance, {"frame", "det_index", "vec"},
                           [&](std::size_t line, const jsonl::Json& obj) {
                               Embedding e;
                               e.frame = jsonl::get_int(obj, "frame", line, provenance);
                               if (e.frame < 0) {
                                   throw ValidationError(line, provenance, "frame", "must be non-negative");
                               }
                               const auto idx = jsonl::get_int(obj, "det_index", line, provenance);
                               if (idx < 0) {
                                   throw ValidationError(line, provenance, "det_index", "must be non-negative");
                               }
                               e.det_index = static_cast<std::size_t>(idx);
                               const auto& v = obj.at("vec");
                               if (!v.is_array()) {
                                   throw ValidationError(line, provenance, "vec", "expected an array");
                               }
                               if (v.size() != kEmbeddingDim) {
                                   throw ValidationError(line, provenance, "vec",
                                                         "dimension mismatch: found " + std::to_string(v.size()) +
                                                             ", expected " + std::to_string(kEmbeddingDim));
                               }
                               e.vec.reserve(kEmbeddingDim);
                               for (const auto& c : v) {
                                   e.vec.push_back(jsonl::get_number(c, "vec", line, provenance));
                               }
                               out.push_back(std::move(e));
                           });
    if (detections != nullptr) {
        link_embeddings(out, *detections);
    }
    return out;
}

inline void write_embedding(std::ostream& out, const Embedding& e) {
    jsonl::OrderedJson obj;
    obj["frame"] = e.frame;
    obj["det_index"] = e.det_index;
    obj["vec"] = e.vec;
    out << obj.dump() << '\n';
}

} // namespace pitchtrack

#endif
