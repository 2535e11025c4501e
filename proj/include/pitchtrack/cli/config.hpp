#ifndef PITCHTRACK_CLI_CONFIG_HPP
#define PITCHTRACK_CLI_CONFIG_HPP

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "../core/classes.hpp"
#include "../core/error.hpp"
#include "../core/jsonl.hpp"
#include "../eval/report.hpp"
#include "../render/render.hpp"
#include "../sim/config.hpp"
#include "../team/layout.hpp"
#include "../tracker/byte_tracker.hpp"

namespace pitchtrack {

inline constexpr const char* kConfigEnvVar = "PITCHTRACK_CONFIG";

struct PipelinePaths {
    std::optional<std::filesystem::path> detections;
    std::optional<std::filesystem::path> embeddings;
    std::optional<std::filesystem::path> ground_truth;
    std::optional<std::filesystem::path> tracks;
    std::filesystem::path output = "out";
};

struct PipelineConfig {
    PipelinePaths paths;
    ClassMap classes;
    TrackerConfig tracker;
    UmapConfig umap;
    SimConfig simulator;
    EvalOptions evaluation;
    RenderOptions render;
    bool render_enabled = true;
    std::int64_t tracking_stride = 1;
    std::int64_t embedding_stride = 30;
    std::uint64_t seed = 42;
    bool quiet = false;

    void validate() const {
        tracker.validate();
        umap.validate();
        if (tracking_stride < 1 || embedding_stride < 1) {
            throw ConfigError("strides must be >= 1");
        }
        if (render.frame_stride < 1 || !(render.scale > 0) || render.frame_width < 1 || render.frame_height < 1) {
            throw ConfigError("render: invalid frame size, scale or stride");
        }
    }
};

namespace detail {

template <typename Fn>
void for_keys(const jsonl::Json& j, const std::string& section, Fn&& fn) {
    if (!j.is_object()) {
        throw ConfigError("config section \"" + section + "\" must be an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!fn(it.key(), it.value())) {
            throw ConfigError("config section \"" + section + "\": unknown key \"" + it.key() + "\"");
        }
    }
}

inline ClassGate parse_gate(const jsonl::Json& j, ClassGate g) {
    for_keys(j, "tracker.class_gates", [&](const std::string& k, const jsonl::Json& v) {
        if (k == "min_box_area") {
            g.min_box_area = v.get<double>();
        } else if (k == "max_aspect_ratio") {
            g.max_aspect_ratio = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
        } else {
            return false;
        }
        return true;
    });
    return g;
}

inline void parse_tracker(const jsonl::Json& j, TrackerConfig& t) {
    for_keys(j, "tracker", [&](const std::string& k, const jsonl::Json& v) {
        if (k == "high_score_threshold") t.high_score_threshold = v.get<double>();
        else if (k == "low_score_floor") t.low_score_floor = v.get<double>();
        else if (k == "new_track_threshold") t.new_track_threshold = v.get<double>();
        else if (k == "stage1_min_iou") t.stage1_min_iou = v.get<double>();
        else if (k == "stage2_min_iou") t.stage2_min_iou = v.get<double>();
        else if (k == "max_lost_age") t.max_lost_age = v.get<FrameIndex>();
        else if (k == "class_gates") {
            for_keys(v, "tracker.class_gates", [&](const std::string& name, const jsonl::Json& g) {
                const auto cls = class_from_name(name);
                if (!cls) {
                    return false;
                }
                t.gates[class_index(*cls)] = parse_gate(g, t.gates[class_index(*cls)]);
                return true;
            });
        } else return false;
        return true;
    });
}

inline void parse_umap(const jsonl::Json& j, UmapConfig& u) {
    for_keys(j, "umap", [&](const std::string& k, const jsonl::Json& v) {
        if (k == "n_neighbors") u.n_neighbors = v.get<std::size_t>();
        else if (k == "n_components") {
            if (v.get<int>() != 3) {
                throw ConfigError("umap: n_components is fixed at 3");
            }
        } else if (k == "min_dist") u.min_dist = v.get<double>();
        else if (k == "epochs") u.epochs = v.get<int>();
        else if (k == "negative_sample_rate") u.negative_sample_rate = v.get<int>();
        else if (k == "learning_rate") u.learning_rate = v.get<double>();
        else return false;
        return true;
    });
}

inline void parse_render(const jsonl::Json& j, PipelineConfig& c) {
    for_keys(j, "render", [&](const std::string& k, const jsonl::Json& v) {
        if (k == "enabled") c.render_enabled = v.get<bool>();
        else if (k == "frame_width") c.render.frame_width = v.get<int>();
        else if (k == "frame_height") c.render.frame_height = v.get<int>();
        else if (k == "scale") c.render.scale = v.get<double>();
        else if (k == "frame_stride") c.render.frame_stride = v.get<FrameIndex>();
        else return false;
        return true;
    });
}

inline void parse_paths(const jsonl::Json& j, PipelinePaths& p) {
    for_keys(j, "paths", [&](const std::string& k, const jsonl::Json& v) {
        const auto s = v.get<std::string>();
        if (k == "detections") p.detections = s;
        else if (k == "embeddings") p.embeddings = s;
        else if (k == "ground_truth") p.ground_truth = s;
        else if (k == "tracks") p.tracks = s;
        else if (k == "output") p.output = s;
        else return false;
        return true;
    });
}

inline ClassMap parse_class_ids(const jsonl::Json& j) {
    std::array<int, kNumClasses> ids{0, 1, 2, 3};
    for_keys(j, "class_ids", [&](const std::string& k, const jsonl::Json& v) {
        const auto cls = class_from_name(k);
        if (!cls) {
            return false;
        }
        ids[class_index(*cls)] = v.get<int>();
        return true;
    });
    return ClassMap(ids);
}

} // namespace detail

inline PipelineConfig pipeline_config_from_json(const jsonl::Json& j) {
    PipelineConfig c;
    try {
        detail::for_keys(j, "<root>", [&](const std::string& k, const jsonl::Json& v) {
            if (k == "paths") detail::parse_paths(v, c.paths);
            else if (k == "class_ids") c.classes = detail::parse_class_ids(v);
            else if (k == "tracker") detail::parse_tracker(v, c.tracker);
            else if (k == "umap") detail::parse_umap(v, c.umap);
            else if (k == "simulator") c.simulator = SimConfig::from_json(v);
            else if (k == "evaluation") {
                detail::for_keys(v, "evaluation", [&](const std::string& ek, const jsonl::Json& ev) {
                    if (ek == "score_threshold") c.evaluation.score_threshold = ev.get<double>();
                    else if (ek == "iou_threshold") c.evaluation.iou_threshold = ev.get<double>();
                    else return false;
                    return true;
                });
            } else if (k == "render") detail::parse_render(v, c);
            else if (k == "tracking_stride") c.tracking_stride = v.get<std::int64_t>();
            else if (k == "embedding_stride") c.embedding_stride = v.get<std::int64_t>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else return false;
            return true;
        });
    } catch (const jsonl::Json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.umap.seed = c.seed;
    c.validate();
    return c;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open config " + file.string());
    }
    jsonl::Json j;
    try {
        j = jsonl::Json::parse(in);
    } catch (const jsonl::Json::parse_error& e) {
        throw ConfigError("config " + file.string() + ": " + e.what());
    }
    return pipeline_config_from_json(j);
}

/// Explicit path first, then the environment variable, else defaults.
inline PipelineConfig resolve_pipeline_config(const std::optional<std::filesystem::path>& explicit_path) {
    if (explicit_path) {
        return load_pipeline_config(*explicit_path);
    }
    if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
        return load_pipeline_config(env);
    }
    return {};
}

} // namespace pitchtrack

#endif
