#ifndef PITCHTRACK_SIM_CONFIG_HPP
#define PITCHTRACK_SIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "../core/error.hpp"
#include "../core/jsonl.hpp"

namespace pitchtrack {

struct RosterEntry {
    ClassLabel cls = ClassLabel::player;
    std::optional<int> team;
};

/// Object `object_id` is absent from frame `exit_frame` up to (excluding) `reentry_frame`.
struct ScriptedAbsence {
    int object_id = 0;
    FrameIndex exit_frame = 0;
    FrameIndex reentry_frame = 0;
};

struct SimConfig {
    double width = 1920;
    double height = 1080;
    int frames = 300;
    std::vector<RosterEntry> roster = default_roster();

    // Motion: piecewise constant-velocity paths through random waypoints.
    double player_speed_min = 1.0;
    double player_speed_max = 3.0;
    double ball_speed_multiplier = 1.5;
    double jitter_sigma = 0.5;
    int waypoints_per_object = 6;

    // Corruption of the detection stream.
    double dropout = 0.1;
    double box_noise_sigma = 0;
    double false_positive_rate = 0;
    /// Detections overlapped above this IoU by a larger object are dropped; 1 disables.
    double occlusion_iou_threshold = 0.6;
    double score_sigma = 0.04;

    std::vector<ScriptedAbsence> script;

    // Synthetic appearance embeddings.
    int embedding_stride = 30;
    double prototype_norm = 1.0;
    /// Expected norm of the per-embedding noise vector.
    double embedding_noise_sigma = 0.05;

    std::uint64_t seed = 7;

    static std::vector<RosterEntry> default_roster() {
        std::vector<RosterEntry> r;
        for (int team = 0; team < 2; ++team) {
            for (int i = 0; i < 10; ++i) {
                r.push_back({ClassLabel::player, team});
            }
        }
        r.push_back({ClassLabel::goalkeeper, 0});
        r.push_back({ClassLabel::goalkeeper, 1});
        r.push_back({ClassLabel::referee, std::nullopt});
        r.push_back({ClassLabel::ball, std::nullopt});
        return r;
    }

    /// Same scene with every detection corruption switched off.
    SimConfig clean() const {
        SimConfig c = *this;
        c.dropout = 0;
        c.box_noise_sigma = 0;
        c.false_positive_rate = 0;
        c.occlusion_iou_threshold = 1;
        return c;
    }

    void validate() const {
        auto prob = [](double p, const char* name) {
            if (!(p >= 0 && p <= 1)) {
                throw ConfigError(std::string("simulator: ") + name + " must lie in [0, 1]");
            }
        };
        if (frames < 1) {
            throw ConfigError("simulator: frames must be >= 1");
        }
        if (!(width > 0) || !(height > 0)) {
            throw ConfigError("simulator: image size must be positive");
        }
        if (roster.empty()) {
            throw ConfigError("simulator: roster is empty");
        }
        prob(dropout, "dropout");
        prob(occlusion_iou_threshold, "occlusion_iou_threshold");
        if (false_positive_rate < 0 || box_noise_sigma < 0 || jitter_sigma < 0 || score_sigma < 0 ||
            embedding_noise_sigma < 0) {
            throw ConfigError("simulator: rates and sigmas must be non-negative");
        }
        if (!(player_speed_min > 0) || player_speed_max < player_speed_min || !(ball_speed_multiplier > 0)) {
            throw ConfigError("simulator: need 0 < player_speed_min <= player_speed_max");
        }
        if (waypoints_per_object < 1 || embedding_stride < 1) {
            throw ConfigError("simulator: waypoints_per_object and embedding_stride must be >= 1");
        }
        for (const auto& s : script) {
            if (s.object_id < 1 || s.object_id > static_cast<int>(roster.size())) {
                throw ConfigError("simulator: script names unknown object " + std::to_string(s.object_id));
            }
            if (s.reentry_frame <= s.exit_frame) {
                throw ConfigError("simulator: object " + std::to_string(s.object_id) + " re-enters at frame " +
                                  std::to_string(s.reentry_frame) + ", not after its exit at frame " +
                                  std::to_string(s.exit_frame));
            }
        }
    }

    static SimConfig from_json(const jsonl::Json& j) {
        SimConfig c;
        try {
            for (auto it = j.begin(); it != j.end(); ++it) {
                const auto& k = it.key();
                const auto& v = it.value();
                if (k == "width") c.width = v.get<double>();
                else if (k == "height") c.height = v.get<double>();
                else if (k == "frames") c.frames = v.get<int>();
                else if (k == "player_speed_min") c.player_speed_min = v.get<double>();
                else if (k == "player_speed_max") c.player_speed_max = v.get<double>();
                else if (k == "ball_speed_multiplier") c.ball_speed_multiplier = v.get<double>();
                else if (k == "jitter_sigma") c.jitter_sigma = v.get<double>();
                else if (k == "waypoints_per_object") c.waypoints_per_object = v.get<int>();
                else if (k == "dropout") c.dropout = v.get<double>();
                else if (k == "box_noise_sigma") c.box_noise_sigma = v.get<double>();
                else if (k == "false_positive_rate") c.false_positive_rate = v.get<double>();
                else if (k == "occlusion_iou_threshold") c.occlusion_iou_threshold = v.get<double>();
                else if (k == "score_sigma") c.score_sigma = v.get<double>();
                else if (k == "embedding_stride") c.embedding_stride = v.get<int>();
                else if (k == "prototype_norm") c.prototype_norm = v.get<double>();
                else if (k == "embedding_noise_sigma") c.embedding_noise_sigma = v.get<double>();
                else if (k == "seed") c.seed = v.get<std::uint64_t>();
                else if (k == "roster") {
                    c.roster.clear();
                    for (const auto& e : v) {
                        RosterEntry r;
                        const auto name = e.at("class").get<std::string>();
                        const auto cls = class_from_name(name);
                        if (!cls) {
                            throw ConfigError("simulator: unknown roster class \"" + name + "\"");
                        }
                        r.cls = *cls;
                        if (e.contains("team") && !e.at("team").is_null()) {
                            r.team = e.at("team").get<int>();
                        }
                        c.roster.push_back(r);
                    }
                } else if (k == "script") {
                    for (const auto& e : v) {
                        c.script.push_back({e.at("object_id").get<int>(), e.at("exit_frame").get<FrameIndex>(),
                                            e.at("reentry_frame").get<FrameIndex>()});
                    }
                } else {
                    throw ConfigError("simulator: unknown key \"" + k + "\"");
                }
            }
        } catch (const jsonl::Json::exception& e) {
            throw ConfigError(std::string("simulator: ") + e.what());
        }
        c.validate();
        return c;
    }
};

} // namespace pitchtrack

#endif
