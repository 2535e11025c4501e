#ifndef PITCHTRACK_INGEST_ADAPTER_HPP
#define PITCHTRACK_INGEST_ADAPTER_HPP

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "../core/classes.hpp"
#include "../core/error.hpp"
#include "../core/jsonl.hpp"
#include "detection_io.hpp"
#include "letterbox.hpp"

namespace pitchtrack {

/**
 * Declarative description of an external detector.
 *
 * `command` runs `path [args...] <frame-source>`. `model-file` runs
 * `runtime [args...] <path> <frame-source> <model-size>`. Either way the
 * process must print the detection stream schema on stdout.
 */
struct AdapterConfig {
    enum class Kind { command, model_file };

    Kind kind = Kind::command;
    std::string path;
    std::string runtime;
    std::vector<std::string> args;
    double model_size = 1280;
    double confidence_floor = 0;
    /// When set, adapter boxes are in letterboxed model space and are mapped back.
    bool letterboxed = false;
    double frame_width = 0;
    double frame_height = 0;

    static AdapterConfig from_json(const jsonl::Json& j) {
        static const char* known[] = {"kind", "path", "runtime", "args", "model_size",
                                      "confidence_floor", "letterboxed", "frame_width", "frame_height"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (auto* k : known) {
                ok = ok || it.key() == k;
            }
            if (!ok) {
                throw ConfigError("adapter config: unknown key \"" + it.key() + "\"");
            }
        }
        AdapterConfig c;
        try {
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "command") {
                c.kind = Kind::command;
            } else if (kind == "model-file") {
                c.kind = Kind::model_file;
            } else {
                throw ConfigError("adapter config: kind must be \"command\" or \"model-file\", got \"" + kind + "\"");
            }
            c.path = j.at("path").get<std::string>();
            c.runtime = j.value("runtime", std::string{});
            c.args = j.value("args", std::vector<std::string>{});
            c.model_size = j.value("model_size", 1280.0);
            c.confidence_floor = j.value("confidence_floor", 0.0);
            c.letterboxed = j.value("letterboxed", false);
            c.frame_width = j.value("frame_width", 0.0);
            c.frame_height = j.value("frame_height", 0.0);
        } catch (const jsonl::Json::exception& e) {
            throw ConfigError(std::string("adapter config: ") + e.what());
        }
        if (c.kind == Kind::model_file && c.runtime.empty()) {
            throw ConfigError("adapter config: model-file adapters need a \"runtime\"");
        }
        if (c.confidence_floor < 0 || c.confidence_floor > 1) {
            throw ConfigError("adapter config: confidence_floor must lie in [0, 1]");
        }
        if (c.letterboxed && (!(c.frame_width > 0) || !(c.frame_height > 0))) {
            throw ConfigError("adapter config: letterboxed output needs frame_width and frame_height");
        }
        return c;
    }

    static AdapterConfig load(const std::filesystem::path& file) {
        std::ifstream in(file);
        if (!in) {
            throw ConfigError("cannot open adapter config " + file.string());
        }
        try {
            return from_json(jsonl::Json::parse(in));
        } catch (const jsonl::Json::parse_error& e) {
            throw ConfigError("adapter config " + file.string() + ": " + e.what());
        }
    }
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'') {
            out += "'\\''";
        } else {
            out += ch;
        }
    }
    out += "'";
    return out;
}

struct ProcessResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

inline ProcessResult run_capture(const std::vector<std::string>& argv) {
    char tmpl[] = "/tmp/pitchtrack-adapter-XXXXXX";
    const int fd = ::mkstemp(tmpl);
    if (fd < 0) {
        throw AdapterError(std::string("cannot create stderr capture file: ") + std::strerror(errno));
    }
    ::close(fd);
    const std::string err_path = tmpl;

    std::string cmd;
    for (const auto& a : argv) {
        cmd += shell_quote(a) + " ";
    }
    cmd += "2>" + shell_quote(err_path);

    ProcessResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        std::filesystem::remove(err_path);
        throw AdapterError(std::string("cannot launch adapter: ") + std::strerror(errno));
    }
    char buf[1 << 14];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
        r.out.append(buf, n);
    }
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    {
        std::ifstream err(err_path);
        std::ostringstream ss;
        ss << err.rdbuf();
        r.err = ss.str();
    }
    std::filesystem::remove(err_path);
    return r;
}

} // namespace detail

/**
 * Runs the configured detector over `frame_source` and returns its detections
 * in original-frame coordinates.
 */
inline DetectionStream run_external_detector(const std::string& frame_source, const AdapterConfig& cfg,
                                             const ClassMap& classes = {}) {
    std::vector<std::string> argv;
    if (cfg.kind == AdapterConfig::Kind::command) {
        argv.push_back(cfg.path);
        argv.insert(argv.end(), cfg.args.begin(), cfg.args.end());
        argv.push_back(frame_source);
    } else {
        argv.push_back(cfg.runtime);
        argv.insert(argv.end(), cfg.args.begin(), cfg.args.end());
        argv.push_back(cfg.path);
        argv.push_back(frame_source);
        std::ostringstream size;
        size << cfg.model_size;
        argv.push_back(size.str());
    }

    const auto result = detail::run_capture(argv);
    if (result.exit_code != 0) {
        throw AdapterError("adapter \"" + argv.front() + "\" exited with status " + std::to_string(result.exit_code) +
                           (result.err.empty() ? std::string{} : ": " + result.err));
    }

    std::istringstream in(result.out);
    auto raw = parse_detections(in, classes, "adapter");

    DetectionStream out;
    out.detections.reserve(raw.size());
    std::optional<LetterboxTransform> lb;
    if (cfg.letterboxed) {
        lb = LetterboxTransform::make(cfg.frame_width, cfg.frame_height, cfg.model_size);
    }
    for (auto d : raw.detections) {
        if (d.score < cfg.confidence_floor) {
            continue;
        }
        if (lb) {
            auto mapped = unletterbox(d.box, *lb);
            if (!mapped) {
                continue;
            }
            d.box = *mapped;
        }
        out.detections.push_back(d);
    }
    return out;
}

} // namespace pitchtrack

#endif
