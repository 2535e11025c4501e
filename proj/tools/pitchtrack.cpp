// Command-line front end for the pitchtrack library.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "pitchtrack/cli/commands.hpp"
#include "pitchtrack/cli/config.hpp"

namespace fs = std::filesystem;
using namespace pitchtrack;

namespace {

struct Flags {
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> output;
    std::optional<std::int64_t> tracking_stride;
    std::optional<std::int64_t> embedding_stride;
    bool quiet = false;

    std::optional<fs::path> detections;
    std::optional<fs::path> embeddings;
    std::optional<fs::path> ground_truth;
    std::optional<fs::path> tracks;
    std::optional<int> frames;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<double> scale;
    std::optional<std::int64_t> frame_stride;
    bool no_render = false;
};

PipelineConfig build_config(const Flags& f) {
    PipelineConfig c = resolve_pipeline_config(f.config);
    if (f.seed) {
        c.seed = *f.seed;
        c.umap.seed = *f.seed;
        c.simulator.seed = *f.seed;
    }
    if (f.output) c.paths.output = *f.output;
    if (f.tracking_stride) c.tracking_stride = *f.tracking_stride;
    if (f.embedding_stride) {
        c.embedding_stride = *f.embedding_stride;
        c.simulator.embedding_stride = static_cast<int>(*f.embedding_stride);
    }
    c.quiet = f.quiet;
    if (f.detections) c.paths.detections = *f.detections;
    if (f.embeddings) c.paths.embeddings = *f.embeddings;
    if (f.ground_truth) c.paths.ground_truth = *f.ground_truth;
    if (f.tracks) c.paths.tracks = *f.tracks;
    if (f.frames) c.simulator.frames = *f.frames;
    if (f.width) c.render.frame_width = *f.width;
    if (f.height) c.render.frame_height = *f.height;
    if (f.scale) c.render.scale = *f.scale;
    if (f.frame_stride) c.render.frame_stride = *f.frame_stride;
    if (f.no_render) c.render_enabled = false;
    c.validate();
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soccer tracking, team assignment and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--config", f.config, "Pipeline config file (default: $PITCHTRACK_CONFIG)");
    app.add_option("--seed", f.seed, "Seed for clustering and simulation");
    app.add_option("--output", f.output, "Output directory (default: out)");
    app.add_option("--tracking-stride", f.tracking_stride, "Track every n-th frame (default 1)");
    app.add_option("--embedding-stride", f.embedding_stride, "Frames between embedding samples (default 30)");
    app.add_flag("--quiet", f.quiet, "Suppress summaries");

    auto* track = app.add_subcommand("track", "Track detections");
    track->add_option("--detections", f.detections, "Detections file");

    auto* teams = app.add_subcommand("teams", "Assign player tracks to teams");
    teams->add_option("--tracks", f.tracks, "Track file");
    teams->add_option("--detections", f.detections, "Detections file the tracks came from");
    teams->add_option("--embeddings", f.embeddings, "Embeddings file");

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
    evaluate->add_option("--predictions,--detections", f.detections, "Predicted detections file");
    evaluate->add_option("--ground-truth", f.ground_truth, "Ground truth file");
    evaluate->add_option("--tracks", f.tracks, "Optional track file for identity metrics");

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic match");
    simulate->add_option("--frames", f.frames, "Number of frames");

    auto* render = app.add_subcommand("render", "Draw track overlays");
    render->add_option("--tracks", f.tracks, "Track file");
    render->add_option("--width", f.width, "Frame width");
    render->add_option("--height", f.height, "Frame height");
    render->add_option("--scale", f.scale, "Output pixels per frame pixel");
    render->add_option("--frame-stride", f.frame_stride, "Draw every n-th frame");

    auto* pipeline = app.add_subcommand("pipeline", "Track, teams, evaluate and render");
    pipeline->add_option("--detections", f.detections, "Detections file");
    pipeline->add_option("--embeddings", f.embeddings, "Embeddings file");
    pipeline->add_option("--ground-truth", f.ground_truth, "Ground truth file");
    pipeline->add_flag("--no-render", f.no_render, "Skip rendering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    PipelineConfig cfg;
    try {
        cfg = build_config(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    if (track->parsed()) return cmd_track(cfg, std::cout, std::cerr);
    if (teams->parsed()) return cmd_teams(cfg, std::cout, std::cerr);
    if (evaluate->parsed()) return cmd_evaluate(cfg, std::cout, std::cerr);
    if (simulate->parsed()) return cmd_simulate(cfg, std::cout, std::cerr);
    if (render->parsed()) return cmd_render(cfg, std::cout, std::cerr);
    return cmd_pipeline(cfg, std::cout, std::cerr);
}
