#ifndef PITCHTRACK_CORE_JSONL_HPP
#define PITCHTRACK_CORE_JSONL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <istream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "error.hpp"
#include "geometry.hpp"

namespace pitchtrack::jsonl {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

/**
 * Calls `fn(line_number, object)` for every non-blank line of `in`.
 *
 * Lines must decode to a JSON object whose keys are exactly `keys`;
 * anything else is a ParseError carrying the 1-based line number.
 */
template <typename Fn>
void for_each_record(std::istream& in, const std::string& provenance,
                     std::initializer_list<std::string_view> keys, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        Json obj;
        try {
            obj = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ParseError(line_no, provenance, std::string("malformed record: ") + e.what());
        }
        if (!obj.is_object()) {
            throw ParseError(line_no, provenance, "record is not an object");
        }
        for (auto key : keys) {
            if (!obj.contains(key)) {
                throw ParseError(line_no, provenance, "missing field \"" + std::string(key) + "\"");
            }
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (auto key : keys) {
                known = known || it.key() == key;
            }
            if (!known) {
                throw ParseError(line_no, provenance, "unknown field \"" + it.key() + "\"");
            }
        }
        fn(line_no, obj);
    }
    if (in.bad()) {
        throw IoError(provenance + ": read failure");
    }
}

inline std::int64_t get_int(const Json& obj, const char* field, std::size_t line, const std::string& prov) {
    const auto& v = obj.at(field);
    if (!v.is_number_integer()) {
        throw ValidationError(line, prov, field, "expected an integer");
    }
    return v.get<std::int64_t>();
}

inline double get_number(const Json& v, const char* field, std::size_t line, const std::string& prov) {
    if (!v.is_number()) {
        throw ValidationError(line, prov, field, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ValidationError(line, prov, field, "not finite");
    }
    return d;
}

inline BoundingBox get_box(const Json& obj, std::size_t line, const std::string& prov) {
    const auto& v = obj.at("bbox");
    if (!v.is_array() || v.size() != 4) {
        throw ValidationError(line, prov, "bbox", "expected [x1, y1, x2, y2]");
    }
    BoundingBox b{get_number(v[0], "bbox", line, prov), get_number(v[1], "bbox", line, prov),
                  get_number(v[2], "bbox", line, prov), get_number(v[3], "bbox", line, prov)};
    if (!b.valid()) {
        throw ValidationError(line, prov, "bbox", "box must satisfy 0 <= x1 < x2 and 0 <= y1 < y2");
    }
    return b;
}

inline OrderedJson box_json(const BoundingBox& b) {
    return OrderedJson::array({b.x1, b.y1, b.x2, b.y2});
}

} // namespace pitchtrack::jsonl

#endif
