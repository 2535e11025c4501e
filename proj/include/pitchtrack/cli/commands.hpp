#ifndef PITCHTRACK_CLI_COMMANDS_HPP
#define PITCHTRACK_CLI_COMMANDS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "../core/error.hpp"
#include "../eval/identity.hpp"
#include "../eval/report.hpp"
#include "../ingest/detection_io.hpp"
#include "../ingest/embedding_io.hpp"
#include "../ingest/frame_plan.hpp"
#include "../ingest/ground_truth_io.hpp"
#include "../render/render.hpp"
#include "../sim/simulator.hpp"
#include "../team/teams.hpp"
#include "../tracker/byte_tracker.hpp"
#include "../tracker/track_io.hpp"
#include "config.hpp"

namespace pitchtrack {

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitConfigError = 3 };

/// Fixed output file names inside the output directory.
namespace outputs {
inline constexpr const char* tracks = "tracks.jsonl";
inline constexpr const char* tracks_csv = "tracks.csv";
inline constexpr const char* teams = "teams.jsonl";
inline constexpr const char* team_tracks = "tracks_teams.jsonl";
inline constexpr const char* report = "report.txt";
inline constexpr const char* report_records = "report.jsonl";
inline constexpr const char* identity = "identity.jsonl";
inline constexpr const char* ground_truth = "ground_truth.jsonl";
inline constexpr const char* detections = "detections.jsonl";
inline constexpr const char* embeddings = "embeddings.jsonl";
inline constexpr const char* roster = "roster.jsonl";
inline constexpr const char* frames = "frames";
} // namespace outputs

namespace detail {

inline std::ifstream open_input(const std::optional<std::filesystem::path>& p, const char* what) {
    if (!p) {
        throw IoError(std::string("no ") + what + " file given");
    }
    std::ifstream in(*p);
    if (!in) {
        throw IoError("cannot open " + std::string(what) + " file " + p->string());
    }
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& dir, const char* name) {
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + p.string());
    }
    return out;
}

inline DetectionStream read_detections(const PipelineConfig& cfg) {
    auto in = open_input(cfg.paths.detections, "detections");
    return parse_detections(in, cfg.classes, cfg.paths.detections->string());
}

inline std::vector<TrackRow> read_tracks(const std::optional<std::filesystem::path>& p, const ClassMap& classes) {
    auto in = open_input(p, "tracks");
    return parse_track_rows(in, classes, p->string());
}

/// Runs a stage and maps failures to exit codes; the message goes to `err`.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

} // namespace detail

// Stages. Each reads its inputs from the configured paths, writes its
// outputs under paths.output and returns what it wrote.

inline std::vector<TrackRow> stage_track(const PipelineConfig& cfg, std::ostream& log) {
    const auto detections = detail::read_detections(cfg);
    const auto rows = track_rows(run_sequence(detections, cfg.tracker, cfg.tracking_stride));
    {
        auto out = detail::open_output(cfg.paths.output, outputs::tracks);
        write_track_rows(out, rows, cfg.classes);
        auto csv = detail::open_output(cfg.paths.output, outputs::tracks_csv);
        write_track_rows_csv(csv, rows, cfg.classes);
    }
    if (!cfg.quiet) {
        std::map<int, ClassLabel> ids;
        for (const auto& r : rows) {
            ids.emplace(r.track_id, r.cls);
        }
        std::size_t per_class[kNumClasses] = {};
        for (const auto& [id, cls] : ids) {
            ++per_class[class_index(cls)];
        }
        const auto frames = detections.empty() ? 0 : sample_frame_indices(detections.detections.back().frame + 1,
                                                                           cfg.tracking_stride).size();
        log << "frames processed: " << frames << '\n' << "tracks: " << ids.size() << '\n';
        for (auto cls : kAllClasses) {
            log << "  " << class_name(cls) << ": " << per_class[class_index(cls)] << '\n';
        }
    }
    return rows;
}

inline std::vector<TeamAssignment> stage_teams(const PipelineConfig& cfg, std::ostream& log) {
    const auto detections = detail::read_detections(cfg);
    auto emb_in = detail::open_input(cfg.paths.embeddings, "embeddings");
    const auto embeddings = parse_embeddings(emb_in, &detections, cfg.paths.embeddings->string());
    const auto rows = detail::read_tracks(cfg.paths.tracks, cfg.classes);
    const auto tracks = track_detections(rows, detections);

    const bool any_player = std::any_of(tracks.begin(), tracks.end(),
                                        [](const TrackDetections& t) { return t.cls == ClassLabel::player; });
    std::map<DetectionRef, int> labels;
    if (any_player) {
        UmapConfig umap = cfg.umap;
        umap.seed = cfg.seed;
        labels = cluster_players(embeddings, detections, umap).label_of;
    }
    const auto teams = assign_teams(tracks, labels);
    const bool any_team = std::any_of(teams.begin(), teams.end(), [](const TeamAssignment& a) { return a.team; });
    if (any_player && !any_team) {
        throw InsufficientData("no player track has an embedding");
    }
    {
        auto out = detail::open_output(cfg.paths.output, outputs::teams);
        write_team_summary(out, teams);
        auto labelled = detail::open_output(cfg.paths.output, outputs::team_tracks);
        write_track_rows(labelled, apply_teams(rows, teams), cfg.classes);
    }
    if (!cfg.quiet) {
        std::size_t counts[2] = {0, 0};
        std::size_t unassigned = 0;
        for (const auto& a : teams) {
            if (a.team) {
                ++counts[*a.team];
            } else {
                ++unassigned;
            }
        }
        log << "team 0: " << counts[0] << " tracks\n"
            << "team 1: " << counts[1] << " tracks\n"
            << "no team: " << unassigned << " tracks\n";
    }
    return teams;
}

inline EvalReport stage_evaluate(const PipelineConfig& cfg, std::ostream& log) {
    const auto predictions = detail::read_detections(cfg);
    auto gt_in = detail::open_input(cfg.paths.ground_truth, "ground truth");
    const auto gt = parse_ground_truth(gt_in, cfg.classes, cfg.paths.ground_truth->string());
    const auto report = build_report(predictions.detections, gt, cfg.evaluation);
    const auto table = render_report_table(report);
    {
        auto out = detail::open_output(cfg.paths.output, outputs::report);
        out << table;
        auto rec = detail::open_output(cfg.paths.output, outputs::report_records);
        write_report_records(rec, report);
    }
    if (cfg.paths.tracks) {
        const auto rows = detail::read_tracks(cfg.paths.tracks, cfg.classes);
        const auto switches = count_id_switches(gt, rows, cfg.evaluation.iou_threshold);
        const auto retention = identity_retention(gt, rows, cfg.evaluation.iou_threshold);
        auto out = detail::open_output(cfg.paths.output, outputs::identity);
        jsonl::OrderedJson obj;
        obj["id_switches"] = switches;
        obj["objects"] = retention.objects;
        obj["retained"] = retention.retained;
        obj["retention"] = retention.fraction();
        out << obj.dump() << '\n';
        if (!cfg.quiet) {
            log << "id switches: " << switches << ", identity retained for " << retention.retained << "/"
                << retention.objects << " objects\n";
        }
    }
    if (!cfg.quiet) {
        log << table;
    }
    return report;
}

inline SimOutput stage_simulate(const PipelineConfig& cfg, std::ostream& log) {
    SimConfig sim = cfg.simulator;
    sim.validate();
    const auto out = simulate_with_embeddings(sim);
    auto gt = detail::open_output(cfg.paths.output, outputs::ground_truth);
    for (const auto& g : out.ground_truth) {
        write_ground_truth(gt, g, cfg.classes);
    }
    auto det = detail::open_output(cfg.paths.output, outputs::detections);
    serialize_detections(det, out.detections, cfg.classes);
    auto emb = detail::open_output(cfg.paths.output, outputs::embeddings);
    for (const auto& e : out.embeddings) {
        write_embedding(emb, e);
    }
    auto roster = detail::open_output(cfg.paths.output, outputs::roster);
    write_roster(roster, out.roster, cfg.classes);
    if (!cfg.quiet) {
        log << "seed: " << sim.seed << '\n'
            << "frames: " << sim.frames << '\n'
            << "objects: " << out.roster.size() << '\n'
            << "ground truth boxes: " << out.ground_truth.size() << '\n'
            << "detections: " << out.detections.size() << '\n'
            << "embeddings: " << out.embeddings.size() << '\n';
    }
    return out;
}

inline std::vector<std::filesystem::path> stage_render(const PipelineConfig& cfg, std::ostream& log) {
    const auto rows = detail::read_tracks(cfg.paths.tracks, cfg.classes);
    const auto written = render_frames(rows, cfg.render, cfg.paths.output / outputs::frames);
    if (!cfg.quiet) {
        log << "rendered " << written.size() << " frames to " << (cfg.paths.output / outputs::frames).string()
            << '\n';
    }
    return written;
}

// Commands: one stage each, with failures mapped to exit codes.

inline int cmd_track(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] { stage_track(cfg, out); });
}

inline int cmd_teams(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] { stage_teams(cfg, out); });
}

inline int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] { stage_evaluate(cfg, out); });
}

inline int cmd_simulate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] { stage_simulate(cfg, out); });
}

inline int cmd_render(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] { stage_render(cfg, out); });
}

/**
 * Track, teams, evaluation and rendering in sequence.
 *
 * Every stage reads the files the previous one wrote, so the outputs match
 * running the commands one after another. Evaluation is skipped when no
 * ground truth is configured. Frames are rendered at the embedding stride.
 */
inline int cmd_pipeline(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        cfg.validate();
        PipelineConfig c = cfg;
        stage_track(c, out);
        c.paths.tracks = c.paths.output / outputs::tracks;
        stage_teams(c, out);
        c.paths.tracks = c.paths.output / outputs::team_tracks;
        if (c.paths.ground_truth) {
            stage_evaluate(c, out);
        } else if (!c.quiet) {
            out << "no ground truth configured; evaluation skipped\n";
        }
        if (c.render_enabled) {
            c.render.frame_stride = c.embedding_stride;
            stage_render(c, out);
        }
    });
}

} // namespace pitchtrack

#endif
