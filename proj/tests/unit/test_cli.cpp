#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "oracles/oracles.hpp"
#include "pitchtrack/cli/commands.hpp"
#include "pitchtrack/cli/config.hpp"
#include "unit/test_util.hpp"

using namespace pitchtrack;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <typename Cmd>
Run run(Cmd cmd, const PipelineConfig& cfg) {
    std::ostringstream out, err;
    const int code = cmd(cfg, out, err);
    return {code, out.str(), err.str()};
}

/// Runs the installed binary; stdout and stderr are captured to files in `dir`.
Run run_binary(const TempDir& dir, const std::string& args, const std::string& env = "") {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + " '" + std::string(PITCHTRACK_CLI_PATH) + "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status), read_file(out), read_file(err)};
}

PipelineConfig simulate_into(const std::filesystem::path& dir, SimConfig sim = {}) {
    PipelineConfig cfg;
    cfg.quiet = true;
    cfg.simulator = sim;
    cfg.paths.output = dir;
    EXPECT_EQ(run(cmd_simulate, cfg).code, 0);
    PipelineConfig next;
    next.quiet = true;
    next.paths.detections = dir / outputs::detections;
    next.paths.embeddings = dir / outputs::embeddings;
    next.paths.ground_truth = dir / outputs::ground_truth;
    return next;
}

std::vector<TrackRow> read_rows(const std::filesystem::path& p) {
    std::ifstream in(p);
    return parse_track_rows(in);
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

std::vector<std::filesystem::path> files_under(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            out.push_back(std::filesystem::relative(e.path(), root));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

// --------------------------------------------------------------------- track

TEST(CmdTrack, CleanSimulationHasOneIdPerRosterEntry) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim", SimConfig{}.clean());
    cfg.paths.output = dir / "out";
    cfg.quiet = false;
    const auto r = run(cmd_track, cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    std::set<int> ids;
    for (const auto& row : read_rows(dir / "out" / outputs::tracks)) {
        ids.insert(row.track_id);
    }
    EXPECT_EQ(ids.size(), 24u);
    EXPECT_NE(r.out.find("tracks: 24"), std::string::npos);
    EXPECT_NE(r.out.find("frames processed: 300"), std::string::npos);
    EXPECT_NE(r.out.find("player: 20"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / outputs::tracks_csv));
}

TEST(CmdTrack, EmptyInputGivesEmptyTrackFile) {
    TempDir dir;
    write_file(dir / "empty.jsonl", "");
    PipelineConfig cfg;
    cfg.quiet = true;
    cfg.paths.detections = dir / "empty.jsonl";
    cfg.paths.output = dir / "out";
    EXPECT_EQ(run(cmd_track, cfg).code, 0);
    EXPECT_EQ(read_file(dir / "out" / outputs::tracks), "");
}

TEST(CmdTrack, MalformedLineSevenExitsTwoNamingTheLine) {
    TempDir dir;
    std::string s;
    for (int i = 0; i < 6; ++i) {
        s += "{\"frame\": " + std::to_string(i) + ", \"class_id\": 2, \"score\": 0.9, \"bbox\": [1, 2, 30, 80]}\n";
    }
    s += "{\"frame\": 6, \"class_id\": 2, \"score\": 0.9, \"bbox\": [1, 2, 30\n";
    write_file(dir / "bad.jsonl", s);
    const auto r = run_binary(dir, "track --detections '" + (dir / "bad.jsonl").string() + "' --output '" +
                                       (dir / "out").string() + "'");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(":7:"), std::string::npos) << r.err;
}

TEST(CmdTrack, MissingInputIsDataError) {
    TempDir dir;
    PipelineConfig cfg;
    cfg.paths.detections = dir / "nope.jsonl";
    cfg.paths.output = dir / "out";
    EXPECT_EQ(run(cmd_track, cfg).code, 2);
}

TEST(CmdTrack, BadConfigExitsThree) {
    TempDir dir;
    write_file(dir / "cfg.json", R"({"tracker": {"max_lost_age": 0}})");
    EXPECT_EQ(run_binary(dir, "track --config '" + (dir / "cfg.json").string() + "'").code, 3);
    write_file(dir / "cfg.json", R"({"trackr": {}})");
    EXPECT_EQ(run_binary(dir, "track --config '" + (dir / "cfg.json").string() + "'").code, 3);
    EXPECT_EQ(run_binary(dir, "track --tracking-stride 0").code, 3);
    EXPECT_EQ(run_binary(dir, "frobnicate").code, 3);
}

// ------------------------------------------------------------------ evaluate

TEST(CmdEvaluate, SelfEvaluationIsPerfect) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    // Turn the ground truth into a prediction file.
    std::ifstream gin(*cfg.paths.ground_truth);
    std::ofstream pout(dir / "preds.jsonl");
    for (const auto& g : parse_ground_truth(gin)) {
        write_detection(pout, {g.frame, g.cls, 1.0, g.box});
    }
    pout.close();
    cfg.paths.detections = dir / "preds.jsonl";
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_evaluate, cfg).code, 0);
    for (const auto& line : lines_of(read_file(dir / "out" / outputs::report_records))) {
        const auto j = jsonl::Json::parse(line);
        for (const char* k : {"precision", "recall", "map50", "map5095"}) {
            EXPECT_EQ(j.at(k).get<double>(), 1.0) << line;
        }
    }
}

TEST(CmdEvaluate, MatchesLibraryComputationExactly) {
    TempDir dir;
    SimConfig sim;
    sim.box_noise_sigma = 2;
    sim.false_positive_rate = 0.3;
    auto cfg = simulate_into(dir / "sim", sim);
    cfg.paths.output = dir / "out";
    cfg.quiet = false;
    const auto r = run(cmd_evaluate, cfg);
    ASSERT_EQ(r.code, 0) << r.err;

    std::ifstream din(*cfg.paths.detections), gin(*cfg.paths.ground_truth);
    const auto preds = parse_detections(din);
    const auto gts = parse_ground_truth(gin);
    const auto report = build_report(preds.detections, gts);
    std::ostringstream expected;
    write_report_records(expected, report);
    EXPECT_EQ(read_file(dir / "out" / outputs::report_records), expected.str());
    EXPECT_EQ(read_file(dir / "out" / outputs::report), render_report_table(report));
    EXPECT_NE(r.out.find("mAP50-95"), std::string::npos);
}

TEST(CmdEvaluate, HeaderLayout) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_evaluate, cfg).code, 0);
    const auto first = lines_of(read_file(dir / "out" / outputs::report)).front();
    std::istringstream in(first);
    std::vector<std::string> words;
    for (std::string w; in >> w;) {
        words.push_back(w);
    }
    EXPECT_EQ(words,
              (std::vector<std::string>{"Class", "Images", "Instances", "Precision", "Recall", "mAP50", "mAP50-95"}));
}

TEST(CmdEvaluate, UnknownClassIdInGroundTruthExitsTwo) {
    TempDir dir;
    write_file(dir / "preds.jsonl", R"({"frame": 0, "class_id": 2, "score": 0.9, "bbox": [0, 0, 10, 20]})"
                                    "\n");
    write_file(dir / "gt.jsonl", R"({"frame": 0, "object_id": 1, "class_id": 7, "bbox": [0, 0, 10, 20]})"
                                 "\n");
    PipelineConfig cfg;
    cfg.paths.detections = dir / "preds.jsonl";
    cfg.paths.ground_truth = dir / "gt.jsonl";
    cfg.paths.output = dir / "out";
    const auto r = run(cmd_evaluate, cfg);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("class_id"), std::string::npos);
}

TEST(CmdEvaluate, IdentityMetricsWhenTracksGiven) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim", SimConfig{}.clean());
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_track, cfg).code, 0);
    cfg.paths.tracks = dir / "out" / outputs::tracks;
    ASSERT_EQ(run(cmd_evaluate, cfg).code, 0);
    const auto j = jsonl::Json::parse(read_file(dir / "out" / outputs::identity));
    EXPECT_EQ(j.at("id_switches").get<int>(), 0);
    EXPECT_EQ(j.at("retained").get<int>(), 24);
}

// --------------------------------------------------------------------- teams

TEST(CmdTeams, SimulatedTeamsRecoveredUpToSwap) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_track, cfg).code, 0);
    cfg.paths.tracks = dir / "out" / outputs::tracks;
    cfg.quiet = false;
    const auto r = run(cmd_teams, cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("no team: 4 tracks"), std::string::npos) << r.out;

    // Ground-truth team of each track through its boxes.
    std::ifstream gin(*cfg.paths.ground_truth);
    const auto gts = parse_ground_truth(gin);
    const auto roster = SimConfig::default_roster();
    std::map<int, int> truth_of_track;
    for (const auto& row : read_rows(dir / "out" / outputs::team_tracks)) {
        for (const auto& g : gts) {
            if (g.frame == row.frame && g.box == row.box) {
                const auto& who = roster[static_cast<std::size_t>(g.object_id - 1)];
                if (who.cls == ClassLabel::player) {
                    truth_of_track[row.track_id] = *who.team;
                }
                break;
            }
        }
    }
    std::vector<int> predicted, truth;
    for (const auto& line : lines_of(read_file(dir / "out" / outputs::teams))) {
        const auto j = jsonl::Json::parse(line);
        const int id = j.at("track_id").get<int>();
        if (truth_of_track.count(id)) {
            ASSERT_FALSE(j.at("team").is_null());
            predicted.push_back(j.at("team").get<int>());
            truth.push_back(truth_of_track[id]);
        } else {
            EXPECT_TRUE(j.at("team").is_null());
        }
    }
    EXPECT_EQ(predicted.size(), 20u);
    EXPECT_EQ(oracle::two_label_purity(predicted, truth), 1.0);
}

TEST(CmdTeams, SinglePlayerTrackAndExcludedClasses) {
    TempDir dir;
    std::ofstream dets(dir / "dets.jsonl"), embs(dir / "embs.jsonl");
    for (int f = 0; f < 10; ++f) {
        write_detection(dets, {f, ClassLabel::player, 0.9, {100.0 + f, 100, 134.0 + f, 180}});
        write_detection(dets, {f, ClassLabel::referee, 0.9, {600.0, 100, 634, 180}});
        write_detection(dets, {f, ClassLabel::ball, 0.9, {900.0 + 2 * f, 500, 916.0 + 2 * f, 516}});
        for (std::size_t k = 0; k < 3; ++k) {
            write_embedding(embs, {f, k, std::vector<double>(512, 0.01 * static_cast<double>(k + 1))});
        }
    }
    dets.close();
    embs.close();
    PipelineConfig cfg;
    cfg.quiet = true;
    cfg.paths.detections = dir / "dets.jsonl";
    cfg.paths.embeddings = dir / "embs.jsonl";
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_track, cfg).code, 0);
    cfg.paths.tracks = dir / "out" / outputs::tracks;
    const auto r = run(cmd_teams, cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_rows(dir / "out" / outputs::tracks);
    std::map<int, ClassLabel> cls_of;
    std::map<int, int> count;
    for (const auto& row : rows) {
        cls_of[row.track_id] = row.cls;
        ++count[row.track_id];
    }
    for (const auto& line : lines_of(read_file(dir / "out" / outputs::teams))) {
        const auto j = jsonl::Json::parse(line);
        const int id = j.at("track_id").get<int>();
        if (cls_of[id] == ClassLabel::player) {
            const int team = j.at("team").get<int>();
            EXPECT_TRUE(team == 0 || team == 1);
            EXPECT_EQ(j.at("votes_total").get<int>(), count[id]);
            EXPECT_EQ(count[id], 10);
        } else {
            EXPECT_TRUE(j.at("team").is_null());
        }
    }
}

TEST(CmdTeams, NoPlayerEmbeddingsExitsTwo) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    ASSERT_EQ(run(cmd_track, cfg).code, 0);
    cfg.paths.tracks = dir / "out" / outputs::tracks;
    write_file(dir / "none.jsonl", "");
    cfg.paths.embeddings = dir / "none.jsonl";
    EXPECT_EQ(run(cmd_teams, cfg).code, 2);
}

// ------------------------------------------------------------------ simulate

TEST(CmdSimulate, SameSeedByteIdentical) {
    TempDir dir;
    const auto a = run_binary(dir, "simulate --seed 5 --output '" + (dir / "a").string() + "'");
    const auto b = run_binary(dir, "simulate --seed 5 --output '" + (dir / "b").string() + "'");
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0);
    EXPECT_NE(a.out.find("seed: 5"), std::string::npos);
    for (const char* f : {outputs::ground_truth, outputs::detections, outputs::embeddings, outputs::roster}) {
        EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
        EXPECT_FALSE(read_file(dir / "a" / f).empty()) << f;
    }
}

TEST(CmdSimulate, ZeroFramesIsConfigError) {
    TempDir dir;
    EXPECT_EQ(run_binary(dir, "simulate --frames 0 --output '" + (dir / "a").string() + "'").code, 3);
    write_file(dir / "cfg.json", R"({"simulator": {"frames": 0}})");
    EXPECT_EQ(run_binary(dir, "simulate --config '" + (dir / "cfg.json").string() + "'").code, 3);
    PipelineConfig cfg;
    cfg.simulator.frames = 0;
    cfg.paths.output = dir / "b";
    EXPECT_EQ(run(cmd_simulate, cfg).code, 3);
}

TEST(CmdSimulate, GroundTruthCountMatchesRosterTimesFramesMinusAbsences) {
    TempDir dir;
    SimConfig sim;
    sim.frames = 120;
    sim.script = {{7, 30, 70}, {12, 100, 200}};
    simulate_into(dir.path(), sim);
    const auto lines = lines_of(read_file(dir / outputs::ground_truth));
    EXPECT_EQ(lines.size(), 24u * 120u - 40u - 20u);
    EXPECT_EQ(lines_of(read_file(dir / outputs::roster)).size(), 24u);
}

// -------------------------------------------------------------------- render

TEST(CmdRender, OneTrackOneImage) {
    TempDir dir;
    write_file(dir / "tracks.jsonl",
               R"({"frame":0,"track_id":1,"class_id":2,"team":0,"score":0.9,"bbox":[10.0,20.0,44.0,100.0]})"
               "\n");
    PipelineConfig cfg;
    cfg.quiet = true;
    cfg.paths.tracks = dir / "tracks.jsonl";
    cfg.paths.output = dir / "out";
    cfg.render.frame_width = 200;
    cfg.render.frame_height = 150;
    ASSERT_EQ(run(cmd_render, cfg).code, 0);
    const auto files = files_under(dir / "out");
    ASSERT_EQ(files.size(), 1u);
    const auto img = Canvas::read_ppm(dir / "out" / files[0]);
    EXPECT_EQ(img.at(10, 60), class_color(ClassLabel::player));
    EXPECT_EQ(img.at(43, 60), class_color(ClassLabel::player));
    EXPECT_EQ(img.at(9, 60), kBackground);
    EXPECT_EQ(img.at(44, 60), kBackground);
}

TEST(CmdRender, EmptyTrackFileNoImages) {
    TempDir dir;
    write_file(dir / "tracks.jsonl", "");
    const auto r = run_binary(dir, "render --tracks '" + (dir / "tracks.jsonl").string() + "' --output '" +
                                       (dir / "out").string() + "'");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_FALSE(std::filesystem::exists(dir / "out" / outputs::frames));
}

// ------------------------------------------------------------------ pipeline

TEST(CmdPipeline, EndToEndOnSimulatedMatch) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    cfg.quiet = false;
    const auto r = run(cmd_pipeline, cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto id = jsonl::Json::parse(read_file(dir / "out" / outputs::identity));
    EXPECT_GE(id.at("retention").get<double>(), 0.95);
    EXPECT_NE(r.out.find("mAP50-95"), std::string::npos);
    EXPECT_NE(r.out.find("team 0:"), std::string::npos);
    // Renders land on the embedding stride.
    const auto frames = files_under(dir / "out" / outputs::frames);
    EXPECT_EQ(frames.size(), 10u);
    EXPECT_EQ(frames[1].string(), "frame_000030.ppm");
}

TEST(CmdPipeline, RenderDisabledWritesNoImages) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    cfg.render_enabled = false;
    ASSERT_EQ(run(cmd_pipeline, cfg).code, 0);
    EXPECT_FALSE(std::filesystem::exists(dir / "out" / outputs::frames));
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / outputs::report));
}

TEST(CmdPipeline, MissingEmbeddingsStopsBeforeEvaluation) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "out";
    cfg.paths.embeddings = dir / "missing.jsonl";
    EXPECT_EQ(run(cmd_pipeline, cfg).code, 2);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / outputs::tracks));
    EXPECT_FALSE(std::filesystem::exists(dir / "out" / outputs::report));
}

TEST(CmdPipeline, ChainedOutputsEqualIndividualStages) {
    TempDir dir;
    auto cfg = simulate_into(dir / "sim");
    cfg.paths.output = dir / "chained";
    ASSERT_EQ(run(cmd_pipeline, cfg).code, 0);

    const auto sim = dir / "sim";
    const std::string common = "--output '" + (dir / "staged").string() + "' --quiet";
    ASSERT_EQ(run_binary(dir, "track --detections '" + (sim / outputs::detections).string() + "' " + common).code, 0);
    ASSERT_EQ(run_binary(dir, "teams --tracks '" + (dir / "staged" / outputs::tracks).string() + "' --detections '" +
                                  (sim / outputs::detections).string() + "' --embeddings '" +
                                  (sim / outputs::embeddings).string() + "' " + common)
                  .code,
              0);
    const auto team_tracks = (dir / "staged" / outputs::team_tracks).string();
    ASSERT_EQ(run_binary(dir, "evaluate --detections '" + (sim / outputs::detections).string() +
                                  "' --ground-truth '" + (sim / outputs::ground_truth).string() + "' --tracks '" +
                                  team_tracks + "' " + common)
                  .code,
              0);
    ASSERT_EQ(run_binary(dir, "render --tracks '" + team_tracks + "' --frame-stride 30 " + common).code, 0);

    const auto chained = files_under(dir / "chained");
    ASSERT_EQ(chained, files_under(dir / "staged"));
    for (const auto& f : chained) {
        EXPECT_EQ(read_file(dir / "chained" / f), read_file(dir / "staged" / f)) << f;
    }
}

// -------------------------------------------------------------------- config

TEST(Config, EnvironmentVariableSuppliesDefaultConfig) {
    TempDir dir;
    simulate_into(dir / "sim");
    write_file(dir / "cfg.json", "{\"paths\": {\"detections\": \"" + (dir / "sim" / outputs::detections).string() +
                                     "\", \"output\": \"" + (dir / "envout").string() + "\"}}");
    const auto r = run_binary(dir, "track --quiet", std::string(kConfigEnvVar) + "='" + (dir / "cfg.json").string() + "'");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir / "envout" / outputs::tracks));
}

TEST(Config, FullDocumentParses) {
    const auto cfg = pipeline_config_from_json(jsonl::Json::parse(R"({
        "paths": {"detections": "d.jsonl", "embeddings": "e.jsonl", "ground_truth": "g.jsonl", "output": "o"},
        "class_ids": {"ball": 32, "goalkeeper": 1, "player": 2, "referee": 3},
        "tracker": {"high_score_threshold": 0.5, "max_lost_age": 45,
                    "class_gates": {"ball": {"min_box_area": 4, "max_aspect_ratio": null}}},
        "umap": {"n_neighbors": 10, "min_dist": 0.05, "epochs": 100},
        "evaluation": {"score_threshold": 0.3},
        "render": {"enabled": false, "scale": 0.5},
        "simulator": {"frames": 30},
        "tracking_stride": 2, "embedding_stride": 15, "seed": 9})"));
    EXPECT_EQ(cfg.classes.id_of(ClassLabel::ball), 32);
    EXPECT_EQ(cfg.tracker.max_lost_age, 45);
    EXPECT_EQ(cfg.tracker.gate(ClassLabel::ball).min_box_area, 4);
    EXPECT_EQ(cfg.umap.n_neighbors, 10u);
    EXPECT_EQ(cfg.umap.seed, 9u);
    EXPECT_FALSE(cfg.render_enabled);
    EXPECT_EQ(cfg.simulator.frames, 30);
    EXPECT_EQ(cfg.tracking_stride, 2);
    EXPECT_EQ(*cfg.paths.ground_truth, "g.jsonl");
}

TEST(Config, RejectsBadDocuments) {
    EXPECT_THROW(pipeline_config_from_json(jsonl::Json::parse(R"({"umap": {"n_components": 2}})")), ConfigError);
    EXPECT_THROW(pipeline_config_from_json(jsonl::Json::parse(R"({"class_ids": {"ball": 2}})")), ConfigError);
    EXPECT_THROW(pipeline_config_from_json(jsonl::Json::parse(R"({"tracker": {"max_lost_age": "x"}})")),
                 ConfigError);
    EXPECT_THROW(pipeline_config_from_json(jsonl::Json::parse(R"({"embedding_stride": 0})")), ConfigError);
}
