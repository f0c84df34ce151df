#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "statfuse/fusion.hpp"
#include "statfuse/io.hpp"

namespace statfuse::cli {

enum ExitCode : int { kOk = 0, kUsageOrIo = 1, kNumeric = 2 };

/// Everything that determines a run. Two runs with equal manifests write
/// byte-identical files.
struct RunManifest {
    std::string subcommand;
    std::vector<std::filesystem::path> inputs;
    std::vector<FusionMethod> methods;
    FusionConfig config;
    bool clamp_to_bit_depth = true;
    int levels = kDefaultLevels;
    ReportFormat format = ReportFormat::Csv;
    std::filesystem::path output;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> truth;
    std::string label;
    bool include_origin = false;
    std::uint64_t seed = 1;
    double noise = 0.0;
    std::vector<double> weights;
    int pan_maxval = 255;
    std::size_t scene_width = 0;
    std::size_t scene_height = 0;
};

/// Parses "WxH" or "N" into a window with the given epsilon.
WindowSpec parse_window(const std::string& text, double epsilon);

/// Default degeneracy threshold: STATFUSE_EPSILON if set and valid,
/// otherwise kDefaultEpsilon.
double default_epsilon();

int cmd_fuse(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_evaluate(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_compare(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_synth(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_scene(const RunManifest& run, std::ostream& out, std::ostream& log);

/// Full command line entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace statfuse::cli
